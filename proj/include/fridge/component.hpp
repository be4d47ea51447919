#pragma once

#include <Eigen/Core>

#include "fridge/penalty.hpp"

namespace fridge {

/// Per-coefficient component function g(.) mapping a coefficient vector to
/// the nonnegative GVector the penalty recursion consumes. All variants
/// satisfy g_j = 0 iff beta_j = 0.
class ComponentKind {
 public:
  enum class Type { kAbsolute, kSquare, kAdaptiveAbsolute, kGeometricMean };

  /// g(x) = |x|. The default; the closed-form coordinate update is derived
  /// for this choice.
  static ComponentKind absolute();

  /// g(x) = x^2. Reserved for the iteratively reweighted ridge solver.
  static ComponentKind square();

  /// g_j(x) = |x| / |base_j|^gamma. Base entries with magnitude below
  /// kAdaptiveBaseFloor are rejected; fit the ridge initializer first.
  static ComponentKind adaptive_absolute(double gamma, Eigen::VectorXd base);

  /// g(x) = |x|^{1/(m+1)}, so each penalty term is a geometric mean of
  /// m+1 coefficient magnitudes. The exponent is tied to the penalty
  /// order, which must match the fit's target model size.
  static ComponentKind geometric_mean(int order);

  Type type() const { return type_; }
  double gamma() const { return gamma_; }
  int order() const { return order_; }
  const Eigen::VectorXd& base() const { return base_; }

  /// Adaptive weights 1/|base_j|^gamma (adaptive_absolute only).
  const Eigen::VectorXd& adaptive_weights() const { return adaptive_weights_; }

  /// True for the kinds the coordinate-descent update rule covers
  /// (absolute, adaptive_absolute, geometric_mean).
  bool supports_coordinate_descent() const {
    return type_ != Type::kSquare;
  }

  const char* name() const;

 private:
  ComponentKind() = default;
  Type type_ = Type::kAbsolute;
  double gamma_ = 1.0;
  int order_ = 0;
  Eigen::VectorXd base_;
  Eigen::VectorXd adaptive_weights_;
};

/// Magnitudes below this floor in an adaptive base are treated as zero
/// and rejected (the implied weight would be unbounded).
inline constexpr double kAdaptiveBaseFloor = 1e-8;

/// Evaluation floor for |beta_j| inside the geometric-mean threshold
/// factor, which is otherwise unbounded at beta_j = 0.
inline constexpr double kGeometricMeanFloor = 1e-8;

/// Maps a coefficient vector to its GVector under the given component.
GVector eval_component(const ComponentKind& kind, const Eigen::VectorXd& beta);

/// Single-entry version of eval_component for incremental solvers.
double eval_component_entry(const ComponentKind& kind, Eigen::Index j,
                            double beta_j);

/// Multiplicative factor applied to lambda * P_{m-1}(g_{-j}) inside the
/// soft threshold: 1 for absolute, the adaptive weight for
/// adaptive_absolute, and |beta_j|^{-m/(m+1)} / (m+1) for geometric_mean
/// (evaluated at the current iterate, floored at kGeometricMeanFloor).
double threshold_factor(const ComponentKind& kind, Eigen::Index j,
                        double beta_j, int m);

}  // namespace fridge

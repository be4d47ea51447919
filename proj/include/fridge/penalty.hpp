#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace fridge {

/// Vector of nonnegative per-coefficient component values g_j = g(beta_j).
/// All penalty-engine operations validate nonnegativity and finiteness.
using GVector = Eigen::VectorXd;

/// Result of the forward recursion: the penalty values P_0..P_m together
/// with the auxiliary vectors V_0..V_m that drive the recursion
///
///   V_0 = g,            P_0 = 1' g,
///   V_k = (P_{k-1} - V_{k-1}) o g,   P_k = 1' V_k / (k+1),
///
/// where `o` is the Hadamard product. P_k(g) is the sum over all (k+1)-subsets
/// of {1..p} of the products of the corresponding entries of g, and
/// V_k(g)[j] = g_j * P_{k-1}(g excluding j).
///
/// op_count tallies the adds/multiplies/divides of the recursion itself
/// (evaluating g is not included) and equals (3m+1)p - 1.
struct PenaltyEvaluation {
  int order = 0;                 ///< m
  Eigen::VectorXd p_values;      ///< size m+1, entry k = P_k(g)
  Eigen::MatrixXd v_values;      ///< p x (m+1), column k = V_k(g)
  std::int64_t op_count = 0;

  double p(int k) const { return k < 0 ? 1.0 : p_values[k]; }
};

/// Evaluates P_0..P_m and V_0..V_m by the forward recursion in O(mp) ops.
///
/// Preconditions: 0 <= m < p, all g entries finite and >= 0. Negative
/// intermediates caused by floating cancellation are clamped to 0; a
/// non-finite P_k or V_k raises OverflowError.
PenaltyEvaluation forward_penalty(const GVector& g, int m);

/// P_k of the (p-1)-vector obtained by deleting entry j, computed in O(k)
/// by down-dating the full-vector values:
///
///   P_k(g_{-j}) = P_k(g) - g_j * P_{k-1}(g_{-j}),  seeded at P_{-1} = 1.
///
/// Accepts k = -1 (empty-product convention, returns 1). Negative values
/// from cancellation are clamped to 0.
double leave_one_out(const PenaltyEvaluation& eval, const GVector& g, int k,
                     Eigen::Index j);

/// Gradient of P_m with respect to g: entry j equals P_{m-1}(g_{-j}).
/// For m = 0 every entry is 1.
Eigen::VectorXd penalty_gradient(const GVector& g, int m);

/// Second derivative of P_m: 0 on the diagonal, P_{m-2}(g_{-(j,r)}) off it
/// (P_{-1} = 1 applies when m = 1).
double penalty_hessian_entry(const GVector& g, int m, Eigen::Index j,
                             Eigen::Index r);

/// Backward recursion: starting from the full product S_{p,1} = prod_j g_j,
///
///   V_{p,k} = (S_{p,k-1} - V_{p,k-1}) ./ g,   S_{p,k} = 1' V_{p,k} / (k-1),
///
/// the returned S_{p,k} equals P_{p-k}(g). Requires strictly positive g;
/// entries below 1e-12 are treated as zero and rejected
/// (DegenerateInputError) since the recursion divides by g.
double backward_penalty(const GVector& g, int k);

/// Positivity floor used by backward_penalty.
inline constexpr double kBackwardPositivityFloor = 1e-12;

/// Iteratively-reweighted-Lasso weights w_j = P_{m-1}(g) - V_{m-1}(g)[j].
/// Nonnegative; satisfies sum_j w_j g_j = (m+1) P_m(g). w_j = 0 exactly when
/// every degree-m product excluding index j vanishes, in which case
/// coordinate j is left unpenalized by the reweighted solvers.
/// For m = 0 the weights are the all-ones vector.
Eigen::VectorXd irl_weights(const GVector& g, int m);

/// Incremental view of P_0..P_m(g) for solvers that change one coordinate
/// of g at a time. reset() runs the full forward recursion; downdate(g_j)
/// produces the leave-one-out values P_k(g_{-j}) in O(m); update(g_j_new)
/// restores the full-vector values for the modified g, also in O(m).
/// A full reset at the start of every sweep bounds numerical drift.
class PenaltyState {
 public:
  void reset(const GVector& g, int m);

  /// Fills the leave-one-out values for the coordinate whose current
  /// component value is g_j. Must be paired with update().
  void downdate(double g_j);

  /// Re-derives P_k from the stored leave-one-out values with the new
  /// component value: P_k = P_k(g_{-j}) + g_j_new * P_{k-1}(g_{-j}).
  void update(double g_j_new);

  /// P_k(g_{-j}) from the latest downdate; k = -1 returns 1.
  double loo(int k) const { return k < 0 ? 1.0 : loo_[k]; }

  /// Current full-vector P_k; k = -1 returns 1.
  double total(int k) const { return k < 0 ? 1.0 : p_[k]; }

 private:
  int m_ = 0;
  Eigen::VectorXd p_;     // P_0..P_m of the current g
  Eigen::VectorXd loo_;   // P_0..P_m of g minus the active coordinate
  Eigen::VectorXd scratch_;
};

}  // namespace fridge

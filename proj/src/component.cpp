#include "fridge/component.hpp"

#include <cmath>
#include <string>

#include "fridge/errors.hpp"

namespace fridge {

ComponentKind ComponentKind::absolute() {
  ComponentKind k;
  k.type_ = Type::kAbsolute;
  return k;
}

ComponentKind ComponentKind::square() {
  ComponentKind k;
  k.type_ = Type::kSquare;
  return k;
}

ComponentKind ComponentKind::adaptive_absolute(double gamma,
                                               Eigen::VectorXd base) {
  if (!(gamma > 0.0)) {
    throw InvalidInputError("adaptive gamma must be positive");
  }
  for (Eigen::Index j = 0; j < base.size(); ++j) {
    if (!std::isfinite(base[j]) || std::abs(base[j]) < kAdaptiveBaseFloor) {
      throw InvalidInputError(
          "adaptive base entry " + std::to_string(j) +
          " is zero (or below the floor); fit a ridge initializer first");
    }
  }
  ComponentKind k;
  k.type_ = Type::kAdaptiveAbsolute;
  k.gamma_ = gamma;
  k.base_ = std::move(base);
  k.adaptive_weights_ =
      k.base_.array().abs().pow(-gamma).matrix();
  return k;
}

ComponentKind ComponentKind::geometric_mean(int order) {
  if (order < 0) {
    throw InvalidInputError("geometric_mean order must be >= 0");
  }
  ComponentKind k;
  k.type_ = Type::kGeometricMean;
  k.order_ = order;
  return k;
}

const char* ComponentKind::name() const {
  switch (type_) {
    case Type::kAbsolute: return "abs";
    case Type::kSquare: return "square";
    case Type::kAdaptiveAbsolute: return "adaptive";
    case Type::kGeometricMean: return "geomean";
  }
  return "?";
}

GVector eval_component(const ComponentKind& kind, const Eigen::VectorXd& beta) {
  if (!beta.allFinite()) {
    throw InvalidInputError("beta must be finite");
  }
  switch (kind.type()) {
    case ComponentKind::Type::kAbsolute:
      return beta.cwiseAbs();
    case ComponentKind::Type::kSquare:
      return beta.cwiseProduct(beta);
    case ComponentKind::Type::kAdaptiveAbsolute: {
      if (kind.base().size() != beta.size()) {
        throw InvalidInputError("adaptive base length does not match beta");
      }
      return kind.adaptive_weights().cwiseProduct(beta.cwiseAbs());
    }
    case ComponentKind::Type::kGeometricMean: {
      const double expo = 1.0 / static_cast<double>(kind.order() + 1);
      return beta.array().abs().pow(expo).matrix();
    }
  }
  throw InvalidInputError("unknown component kind");
}

double eval_component_entry(const ComponentKind& kind, Eigen::Index j,
                            double beta_j) {
  switch (kind.type()) {
    case ComponentKind::Type::kAbsolute:
      return std::abs(beta_j);
    case ComponentKind::Type::kSquare:
      return beta_j * beta_j;
    case ComponentKind::Type::kAdaptiveAbsolute:
      return kind.adaptive_weights()[j] * std::abs(beta_j);
    case ComponentKind::Type::kGeometricMean:
      return std::pow(std::abs(beta_j),
                      1.0 / static_cast<double>(kind.order() + 1));
  }
  throw InvalidInputError("unknown component kind");
}

double threshold_factor(const ComponentKind& kind, Eigen::Index j,
                        double beta_j, int m) {
  switch (kind.type()) {
    case ComponentKind::Type::kAbsolute:
      return 1.0;
    case ComponentKind::Type::kAdaptiveAbsolute:
      return kind.adaptive_weights()[j];
    case ComponentKind::Type::kGeometricMean: {
      if (m == 0) return 1.0;
      const double mag = std::max(std::abs(beta_j), kGeometricMeanFloor);
      const double expo = -static_cast<double>(m) / static_cast<double>(m + 1);
      return std::pow(mag, expo) / static_cast<double>(m + 1);
    }
    case ComponentKind::Type::kSquare:
      throw InvalidInputError(
          "square component has no soft-threshold factor; use the "
          "iteratively reweighted ridge solver");
  }
  throw InvalidInputError("unknown component kind");
}

}  // namespace fridge

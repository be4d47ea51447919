#include "fridge/metrics.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "fridge/errors.hpp"

namespace fridge {

double oracle_mse(const Eigen::MatrixXd& x_eval, const Eigen::VectorXd& beta_hat,
                  const Eigen::VectorXd& beta_star) {
  if (beta_hat.size() != x_eval.cols() || beta_star.size() != x_eval.cols()) {
    throw InvalidInputError("oracle_mse dimensions do not conform");
  }
  return (x_eval * (beta_hat - beta_star)).squaredNorm();
}

std::pair<double, double> best_potential(const SolutionPath& path,
                                         const Eigen::MatrixXd& x_eval,
                                         const Eigen::VectorXd& beta_star) {
  if (path.fits.empty()) {
    throw InvalidInputError("best_potential requires a nonempty path");
  }
  double best = std::numeric_limits<double>::infinity();
  double best_lambda = std::numeric_limits<double>::quiet_NaN();
  for (const auto& fit : path.fits) {
    if (fit.failed) continue;
    const double v = oracle_mse(x_eval, fit.raw_coefficients, beta_star);
    if (v < best) {  // strict: smallest lambda wins ties on an ascending grid
      best = v;
      best_lambda = fit.lambda;
    }
  }
  return {best, best_lambda};
}

std::pair<double, double> selection_metrics(
    const std::vector<Eigen::Index>& support_hat,
    const std::vector<Eigen::Index>& support_star, Eigen::Index p) {
  if (support_star.empty()) {
    throw InvalidInputError("sensitivity is undefined for an empty true support");
  }
  const std::set<Eigen::Index> hat(support_hat.begin(), support_hat.end());
  const std::set<Eigen::Index> star(support_star.begin(), support_star.end());
  for (const auto j : hat) {
    if (j < 0 || j >= p) throw InvalidInputError("support index out of range");
  }
  for (const auto j : star) {
    if (j < 0 || j >= p) throw InvalidInputError("support index out of range");
  }

  Eigen::Index hits = 0;
  for (const auto j : star) hits += hat.count(j) ? 1 : 0;
  Eigen::Index true_negatives = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!star.count(j) && !hat.count(j)) ++true_negatives;
  }
  const double sens = 100.0 * static_cast<double>(hits) /
                      static_cast<double>(star.size());
  const double denom = static_cast<double>(p - static_cast<Eigen::Index>(star.size()));
  const double spec =
      denom > 0.0 ? 100.0 * static_cast<double>(true_negatives) / denom : 100.0;
  return {sens, spec};
}

double win_rate(const Eigen::VectorXd& errors_a, const Eigen::VectorXd& errors_b) {
  if (errors_a.size() != errors_b.size()) {
    throw InvalidInputError("win_rate vectors must have equal length");
  }
  if (errors_a.size() == 0) {
    throw InvalidInputError("win_rate requires at least one pair");
  }
  Eigen::Index wins = 0;
  for (Eigen::Index i = 0; i < errors_a.size(); ++i) {
    if (errors_a[i] < errors_b[i]) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(errors_a.size());
}

}  // namespace fridge

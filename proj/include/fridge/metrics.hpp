#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "fridge/solvers.hpp"

namespace fridge {

/// One evaluated method at one setting, Table-row shaped.
struct EvalReport {
  double mse = 0.0;
  int model_size = 0;
  double sensitivity_pct = 0.0;
  double specificity_pct = 0.0;
  std::string method_label;
};

/// || X_eval (beta_hat - beta_star) ||_2^2, the oracle error available in
/// simulation where the true coefficients are known. Raw-scale
/// coefficients; no intercept term (generation is centered).
double oracle_mse(const Eigen::MatrixXd& x_eval, const Eigen::VectorXd& beta_hat,
                  const Eigen::VectorXd& beta_star);

/// Minimum oracle_mse over the path's fits and the lambda attaining it
/// (smallest lambda on ties). Failed fits are skipped.
std::pair<double, double> best_potential(const SolutionPath& path,
                                         const Eigen::MatrixXd& x_eval,
                                         const Eigen::VectorXd& beta_star);

/// (sensitivity %, specificity %) of an estimated support against the true
/// one: 100 |s^ n s*| / |s*| and 100 |complement overlap| / (p - |s*|).
/// An empty true support has undefined sensitivity and raises.
std::pair<double, double> selection_metrics(
    const std::vector<Eigen::Index>& support_hat,
    const std::vector<Eigen::Index>& support_star, Eigen::Index p);

/// Fraction of paired runs with errors_a strictly below errors_b; ties
/// count against a.
double win_rate(const Eigen::VectorXd& errors_a, const Eigen::VectorXd& errors_b);

}  // namespace fridge

#include "fridge/solvers.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fridge/errors.hpp"

namespace fridge {

namespace {

constexpr double kPolishTol = 1e-26;   // on the squared-change metric
constexpr int kPolishCap = 1000;
constexpr double kRefitRidge = 1e-10;  // rank-deficiency resolver in ols_refit

void require_standardized(const Dataset& data, const char* where) {
  if (!data.standardized) {
    throw InvalidInputError(std::string(where) +
                            " requires a standardized dataset");
  }
}

std::vector<Eigen::Index> support_of(const Eigen::VectorXd& beta) {
  std::vector<Eigen::Index> s;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0) s.push_back(j);
  }
  return s;
}

void truncate_in_place(Eigen::VectorXd& beta, double threshold) {
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0 && std::abs(beta[j]) < threshold) beta[j] = 0.0;
  }
}

double fridge_objective(const Dataset& data, const Eigen::VectorXd& beta,
                        const FitConfig& cfg) {
  const double q = (data.y - data.x * beta).squaredNorm() /
                   static_cast<double>(data.n());
  const GVector g = eval_component(cfg.component, beta);
  PenaltyState ps;
  ps.reset(g, cfg.tms);
  return 0.5 * q + cfg.lambda * ps.total(cfg.tms);
}

FridgeFit finalize_fit(const Dataset& data, const FitConfig& cfg,
                       Eigen::VectorXd beta, int sweeps, bool converged,
                       bool stagnated, std::vector<double> objective_trace,
                       std::vector<char> truncation_trace) {
  FridgeFit fit;
  fit.coefficients = std::move(beta);
  fit.raw_coefficients = raw_coefficients(data, fit.coefficients);
  fit.intercept = raw_intercept(data, fit.coefficients);
  fit.support = support_of(fit.coefficients);
  fit.lambda = cfg.lambda;
  fit.tms = cfg.tms;
  fit.component = cfg.component;
  fit.sweeps_used = sweeps;
  fit.converged = converged;
  fit.stagnated = stagnated;
  fit.objective = fridge_objective(data, fit.coefficients, cfg);
  fit.kkt_residual = kkt_check(data, fit);
  if (cfg.record_trace) {
    fit.objective_trace = std::move(objective_trace);
    fit.truncation_trace = std::move(truncation_trace);
  }
  return fit;
}

}  // namespace

void FitConfig::validate(Eigen::Index p) const {
  if (tms < 0 || tms >= p) {
    throw InvalidInputError("tms = " + std::to_string(tms) +
                            " must satisfy 0 <= tms < p = " + std::to_string(p));
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidInputError("lambda must be finite and >= 0");
  }
  if (!(convergence_tol > 0.0) || !(truncation_threshold >= 0.0)) {
    throw InvalidInputError("tolerances must be positive");
  }
  if (max_sweeps < 1) {
    throw InvalidInputError("max_sweeps must be >= 1");
  }
  if (component.type() == ComponentKind::Type::kGeometricMean &&
      component.order() != tms) {
    throw InvalidInputError(
        "geometric_mean component order must equal the target model size");
  }
  if (component.type() == ComponentKind::Type::kAdaptiveAbsolute &&
      component.base().size() != p) {
    throw InvalidInputError("adaptive base length must equal p");
  }
}

Eigen::VectorXd ridge_solve(const Dataset& data, double lambda) {
  require_standardized(data, "ridge_solve");
  if (!(lambda > 0.0)) {
    throw InvalidInputError("ridge_solve requires lambda > 0");
  }
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const double dn = static_cast<double>(n);
  if (p <= n) {
    Eigen::MatrixXd gram = data.x.transpose() * data.x / dn;
    gram.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
      throw LinearAlgebraError("ridge system is not positive definite");
    }
    return llt.solve(data.x.transpose() * data.y / dn);
  }
  // dual: beta = X' (X X' + n lambda I)^-1 y
  Eigen::MatrixXd outer = data.x * data.x.transpose();
  outer.diagonal().array() += dn * lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(outer);
  if (llt.info() != Eigen::Success) {
    throw LinearAlgebraError("dual ridge system is not positive definite");
  }
  return data.x.transpose() * llt.solve(data.y);
}

OlsFit ols_refit(const Dataset& data, const std::vector<Eigen::Index>& support) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const auto s = static_cast<Eigen::Index>(support.size());
  if (s > n) {
    throw InvalidInputError("support size exceeds the sample count");
  }
  OlsFit fit;
  fit.coefficients = Eigen::VectorXd::Zero(p);
  const double my = data.y.mean();
  if (s == 0) {
    fit.intercept = my;
    return fit;
  }
  for (const auto j : support) {
    if (j < 0 || j >= p) {
      throw InvalidInputError("support index " + std::to_string(j) +
                              " out of range");
    }
  }

  const double dn = static_cast<double>(n);
  Eigen::MatrixXd xs(n, s);
  Eigen::VectorXd mu(s), scale(s);
  for (Eigen::Index k = 0; k < s; ++k) {
    xs.col(k) = data.x.col(support[k]);
    mu[k] = xs.col(k).mean();
    xs.col(k).array() -= mu[k];
    const double sm = xs.col(k).squaredNorm() / dn;
    scale[k] = sm > 0.0 ? std::sqrt(sm) : 1.0;  // constant column: coef 0
    xs.col(k) /= scale[k];
    if (sm <= 0.0) xs.col(k).setZero();
  }
  Eigen::VectorXd yc = data.y.array() - my;

  Eigen::MatrixXd gram = xs.transpose() * xs / dn;
  gram.diagonal().array() += kRefitRidge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) {
    throw LinearAlgebraError("refit system could not be factorized");
  }
  const Eigen::VectorXd b = ldlt.solve(xs.transpose() * yc / dn);
  if (!b.allFinite()) {
    throw LinearAlgebraError("refit produced non-finite coefficients");
  }
  fit.intercept = my;
  for (Eigen::Index k = 0; k < s; ++k) {
    const double raw = b[k] / scale[k];
    fit.coefficients[support[k]] = raw;
    fit.intercept -= raw * mu[k];
  }
  return fit;
}

FridgeFit coordinate_descent_fit(const Dataset& data, const FitConfig& cfg,
                                 const Eigen::VectorXd* init) {
  require_standardized(data, "coordinate_descent_fit");
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  cfg.validate(p);
  if (!cfg.component.supports_coordinate_descent()) {
    throw InvalidInputError(
        "square component is handled by irr_fit, not coordinate descent");
  }

  const int m = cfg.tms;
  const double dn = static_cast<double>(n);
  Eigen::VectorXd beta =
      init != nullptr ? *init : ridge_solve(data, cfg.ridge_init_lambda);
  if (beta.size() != p || !beta.allFinite()) {
    throw InvalidInputError("init must be a finite vector of length p");
  }
  truncate_in_place(beta, cfg.truncation_threshold);

  Eigen::VectorXd r = data.y - data.x * beta;
  GVector g = eval_component(cfg.component, beta);
  PenaltyState ps;

  std::vector<double> obj_trace;
  std::vector<char> trunc_trace;
  Eigen::VectorXd last_finite = beta;

  int sweeps = 0;
  bool converged = false;

  // One cyclic pass over `coords`; returns the max coordinate-wise squared
  // fitted change n^-1 sum_i (x_ij dbeta_j)^2, which on standardized data
  // is just dbeta_j^2.
  const auto sweep = [&](const std::vector<Eigen::Index>& coords,
                         bool* truncated) {
    double max_d2 = 0.0;
    for (const Eigen::Index j : coords) {
      ps.downdate(g[j]);
      const double tf = threshold_factor(cfg.component, j, beta[j], m);
      const double thr = cfg.lambda * ps.loo(m - 1) * tf;
      const double rho = data.x.col(j).dot(r) / dn + beta[j];
      double bnew = soft_threshold(rho, thr);
      if (bnew != 0.0 && std::abs(bnew) < cfg.truncation_threshold) {
        bnew = 0.0;
        if (truncated != nullptr) *truncated = true;
      }
      if (bnew != beta[j]) {
        const double delta = bnew - beta[j];
        r.noalias() -= delta * data.x.col(j);
        beta[j] = bnew;
        max_d2 = std::max(max_d2, delta * delta);
      }
      g[j] = eval_component_entry(cfg.component, j, bnew);
      ps.update(g[j]);
    }
    return max_d2;
  };

  std::vector<Eigen::Index> all_coords(p);
  for (Eigen::Index j = 0; j < p; ++j) all_coords[j] = j;

  while (sweeps < cfg.max_sweeps) {
    ps.reset(g, m);
    const double obj = 0.5 * r.squaredNorm() / dn + cfg.lambda * ps.total(m);
    if (!std::isfinite(obj)) {
      throw DivergenceError("coordinate descent objective is non-finite",
                            last_finite);
    }
    last_finite = beta;
    bool truncated = false;
    const double d2_full = sweep(all_coords, &truncated);
    ++sweeps;
    if (cfg.record_trace) {
      obj_trace.push_back(obj);
      trunc_trace.push_back(truncated ? 1 : 0);
    }
    if (d2_full < cfg.convergence_tol) {
      converged = true;
      break;
    }
    // Iterate on the active set before the next full pass.
    std::vector<Eigen::Index> active = support_of(beta);
    while (!active.empty() && sweeps < cfg.max_sweeps) {
      const double d2 = sweep(active, nullptr);
      ++sweeps;
      if (d2 < cfg.convergence_tol) break;
      std::erase_if(active, [&](Eigen::Index j) { return beta[j] == 0.0; });
    }
  }

  if (converged) {
    // Tighten the fixed point on the final support; zero coordinates are
    // left untouched so the support cannot grow here.
    std::vector<Eigen::Index> active = support_of(beta);
    for (int it = 0; it < kPolishCap && !active.empty(); ++it) {
      if (it % 50 == 0) ps.reset(g, m);
      const double d2 = sweep(active, nullptr);
      std::erase_if(active, [&](Eigen::Index j) { return beta[j] == 0.0; });
      if (d2 < kPolishTol) break;
    }
  }

  return finalize_fit(data, cfg, std::move(beta), sweeps, converged, false,
                      std::move(obj_trace), std::move(trunc_trace));
}

Eigen::VectorXd weighted_lasso(const Dataset& data,
                               const Eigen::VectorXd& weights, double lambda,
                               const Eigen::VectorXd& init,
                               double convergence_tol, int max_sweeps) {
  require_standardized(data, "weighted_lasso");
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (weights.size() != p) {
    throw InvalidInputError("weights length must equal p");
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!std::isfinite(weights[j]) || weights[j] < 0.0) {
      throw InvalidInputError("weights must be finite and nonnegative");
    }
  }
  if (init.size() != p || !init.allFinite()) {
    throw InvalidInputError("init must be a finite vector of length p");
  }

  const double dn = static_cast<double>(n);
  Eigen::VectorXd beta = init;
  Eigen::VectorXd r = data.y - data.x * beta;
  Eigen::VectorXd last_finite = beta;

  const auto sweep = [&](const std::vector<Eigen::Index>& coords) {
    double max_d2 = 0.0;
    for (const Eigen::Index j : coords) {
      const double rho = data.x.col(j).dot(r) / dn + beta[j];
      const double bnew = soft_threshold(rho, lambda * weights[j]);
      if (bnew != beta[j]) {
        const double delta = bnew - beta[j];
        r.noalias() -= delta * data.x.col(j);
        beta[j] = bnew;
        max_d2 = std::max(max_d2, delta * delta);
      }
    }
    return max_d2;
  };

  std::vector<Eigen::Index> all_coords(p);
  for (Eigen::Index j = 0; j < p; ++j) all_coords[j] = j;

  int sweeps = 0;
  bool converged = false;
  while (sweeps < max_sweeps) {
    const double q = r.squaredNorm() / dn;
    if (!std::isfinite(q)) {
      throw DivergenceError("weighted lasso objective is non-finite",
                            last_finite);
    }
    last_finite = beta;
    const double d2_full = sweep(all_coords);
    ++sweeps;
    if (d2_full < convergence_tol) {
      converged = true;
      break;
    }
    std::vector<Eigen::Index> active = support_of(beta);
    while (!active.empty() && sweeps < max_sweeps) {
      const double d2 = sweep(active);
      ++sweeps;
      if (d2 < convergence_tol) break;
      std::erase_if(active, [&](Eigen::Index j) { return beta[j] == 0.0; });
    }
  }

  if (converged) {
    std::vector<Eigen::Index> active = support_of(beta);
    for (int it = 0; it < kPolishCap && !active.empty(); ++it) {
      const double d2 = sweep(active);
      std::erase_if(active, [&](Eigen::Index j) { return beta[j] == 0.0; });
      if (d2 < kPolishTol) break;
    }
  }
  return beta;
}

FridgeFit irl_fit(const Dataset& data, const FitConfig& cfg,
                  const Eigen::VectorXd* init) {
  require_standardized(data, "irl_fit");
  const Eigen::Index p = data.p();
  cfg.validate(p);
  const auto type = cfg.component.type();
  if (type != ComponentKind::Type::kAbsolute &&
      type != ComponentKind::Type::kAdaptiveAbsolute) {
    throw InvalidInputError(
        "irl_fit supports the absolute and adaptive_absolute components");
  }

  const int m = cfg.tms;
  Eigen::VectorXd beta =
      init != nullptr ? *init : ridge_solve(data, cfg.ridge_init_lambda);
  if (beta.size() != p || !beta.allFinite()) {
    throw InvalidInputError("init must be a finite vector of length p");
  }
  truncate_in_place(beta, cfg.truncation_threshold);

  // Component-side factors: 1 for absolute, the adaptive weights otherwise.
  Eigen::VectorXd tf(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    tf[j] = threshold_factor(cfg.component, j, beta[j], m);
  }

  if (m == 0) {
    // Unit penalty weights are fixed; a single weighted Lasso solve is the
    // whole algorithm.
    beta = weighted_lasso(data, tf, cfg.lambda, beta, cfg.convergence_tol,
                          cfg.max_sweeps);
    truncate_in_place(beta, cfg.truncation_threshold);
    return finalize_fit(data, cfg, std::move(beta), 1, true, false, {}, {});
  }

  const double inner_lambda = cfg.lambda / static_cast<double>(m + 1);
  double prev_obj = fridge_objective(data, beta, cfg);
  int non_decrease = 0;
  int outer = 0;
  bool converged = false;
  bool stagnated = false;

  while (outer < cfg.max_sweeps) {
    const GVector g = eval_component(cfg.component, beta);
    const Eigen::VectorXd w = irl_weights(g, m).cwiseProduct(tf);
    Eigen::VectorXd next = weighted_lasso(data, w, inner_lambda, beta,
                                          cfg.convergence_tol, cfg.max_sweeps);
    truncate_in_place(next, cfg.truncation_threshold);
    ++outer;

    const double obj = fridge_objective(data, next, cfg);
    if (!std::isfinite(obj)) {
      throw DivergenceError("IRL objective is non-finite", beta);
    }
    const double max_d2 = (next - beta).array().square().maxCoeff();
    beta = std::move(next);
    if (max_d2 < cfg.convergence_tol) {
      converged = true;
      break;
    }
    if (obj >= prev_obj) {
      if (++non_decrease >= 5) {
        stagnated = true;
        break;
      }
    } else {
      non_decrease = 0;
    }
    prev_obj = obj;
  }

  return finalize_fit(data, cfg, std::move(beta), outer, converged, stagnated,
                      {}, {});
}

FridgeFit irr_fit(const Dataset& data, const FitConfig& cfg,
                  const Eigen::VectorXd* init) {
  require_standardized(data, "irr_fit");
  const Eigen::Index p = data.p();
  cfg.validate(p);
  if (cfg.component.type() != ComponentKind::Type::kSquare) {
    throw InvalidInputError("irr_fit requires the square component");
  }

  const int m = cfg.tms;
  const double dn = static_cast<double>(data.n());
  const Eigen::MatrixXd gram = data.x.transpose() * data.x / dn;
  const Eigen::VectorXd xty = data.x.transpose() * data.y / dn;

  Eigen::VectorXd beta =
      init != nullptr ? *init : ridge_solve(data, cfg.ridge_init_lambda);
  if (beta.size() != p || !beta.allFinite()) {
    throw InvalidInputError("init must be a finite vector of length p");
  }
  truncate_in_place(beta, cfg.truncation_threshold);

  const double inner_lambda = cfg.lambda / static_cast<double>(m + 1);
  double prev_obj = fridge_objective(data, beta, cfg);
  int non_decrease = 0;
  int outer = 0;
  bool converged = false;
  bool stagnated = false;

  while (outer < cfg.max_sweeps) {
    const GVector g = beta.cwiseProduct(beta);
    const Eigen::VectorXd w =
        m == 0 ? Eigen::VectorXd::Ones(p).eval() : irl_weights(g, m);
    Eigen::MatrixXd a = gram;
    a.diagonal() += 2.0 * inner_lambda * w;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success) {
      throw LinearAlgebraError("weighted ridge system could not be factorized");
    }
    Eigen::VectorXd next = ldlt.solve(xty);
    if (!next.allFinite()) {
      throw LinearAlgebraError("weighted ridge solve is singular");
    }
    truncate_in_place(next, cfg.truncation_threshold);
    ++outer;

    const double obj = fridge_objective(data, next, cfg);
    if (!std::isfinite(obj)) {
      throw DivergenceError("IRR objective is non-finite", beta);
    }
    const double max_d2 = (next - beta).array().square().maxCoeff();
    beta = std::move(next);
    if (max_d2 < cfg.convergence_tol) {
      converged = true;
      break;
    }
    if (obj >= prev_obj) {
      if (++non_decrease >= 5) {
        stagnated = true;
        break;
      }
    } else {
      non_decrease = 0;
    }
    prev_obj = obj;
  }

  return finalize_fit(data, cfg, std::move(beta), outer, converged, stagnated,
                      {}, {});
}

double lambda_max(const Dataset& data, int m, double epsilon,
                  const ComponentKind& component) {
  require_standardized(data, "lambda_max");
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (m < 0 || m >= p) {
    throw InvalidInputError("lambda_max order m must satisfy 0 <= m < p");
  }
  const double dn = static_cast<double>(n);
  if (m == 0) {
    // P_{-1} == 1 reduces the condition to the classical Lasso value.
    return (data.x.transpose() * data.y).cwiseAbs().maxCoeff() / dn;
  }
  if (!(epsilon > 0.0)) {
    throw InvalidInputError("epsilon must be positive");
  }
  const GVector gstar = eval_component(
      component, Eigen::VectorXd::Constant(p, epsilon));
  const PenaltyEvaluation ev = forward_penalty(gstar, m - 1);
  const Eigen::VectorXd yabs = data.y.cwiseAbs();
  double best = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double denom = leave_one_out(ev, gstar, m - 1, j);
    if (!(denom > 0.0)) {
      throw InvalidInputError("lambda_max denominator vanished");
    }
    const double num = data.x.col(j).cwiseAbs().dot(yabs) / dn;
    best = std::max(best, num / denom);
  }
  return best;
}

SolutionPath solution_path(const Dataset& data, int m,
                           const Eigen::VectorXd& grid, const FitConfig& cfg) {
  require_standardized(data, "solution_path");
  if (grid.size() == 0) {
    throw InvalidInputError("lambda grid must be nonempty");
  }
  for (Eigen::Index i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw InvalidInputError("lambda grid must be strictly increasing");
    }
  }

  SolutionPath path;
  path.grid = grid;
  path.tms = m;
  path.fits.reserve(grid.size());

  Eigen::VectorXd warm = ridge_solve(data, cfg.ridge_init_lambda);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    FitConfig point_cfg = cfg;
    point_cfg.tms = m;
    point_cfg.lambda = grid[i];
    try {
      FridgeFit fit;
      switch (cfg.solver) {
        case SolverKind::kCoordinateDescent:
          fit = coordinate_descent_fit(data, point_cfg, &warm);
          break;
        case SolverKind::kIrl:
          fit = irl_fit(data, point_cfg, &warm);
          break;
        case SolverKind::kIrr:
          fit = irr_fit(data, point_cfg, &warm);
          break;
      }
      warm = fit.coefficients;
      path.fits.push_back(std::move(fit));
    } catch (const FridgeError&) {
      FridgeFit failed;
      failed.coefficients = Eigen::VectorXd::Zero(data.p());
      failed.raw_coefficients = Eigen::VectorXd::Zero(data.p());
      failed.intercept = data.center_y;
      failed.lambda = grid[i];
      failed.tms = m;
      failed.component = cfg.component;
      failed.failed = true;
      path.fits.push_back(std::move(failed));
      // keep warm-starting from the last successful iterate
    }
  }
  return path;
}

double kkt_check(const Dataset& data, const FridgeFit& fit) {
  require_standardized(data, "kkt_check");
  const Eigen::Index p = data.p();
  const double dn = static_cast<double>(data.n());
  const int m = fit.tms;

  const GVector g = eval_component(fit.component, fit.coefficients);
  PenaltyEvaluation ev;
  if (m >= 1) ev = forward_penalty(g, m - 1);

  const Eigen::VectorXd r = data.y - data.x * fit.coefficients;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double pm1 = m == 0 ? 1.0 : leave_one_out(ev, g, m - 1, j);
    const double tf = threshold_factor(fit.component, j, fit.coefficients[j], m);
    const double grad = data.x.col(j).dot(r) / dn;
    double res;
    if (fit.coefficients[j] != 0.0) {
      const double sign = fit.coefficients[j] > 0.0 ? 1.0 : -1.0;
      res = std::abs(grad - fit.lambda * pm1 * sign * tf);
    } else {
      res = std::max(0.0, std::abs(grad) - fit.lambda * pm1 * tf);
    }
    worst = std::max(worst, res);
  }
  return worst;
}

bool lambda_condition_holds(const Dataset& data, const FridgeFit& fit) {
  require_standardized(data, "lambda_condition_holds");
  const Eigen::Index p = data.p();
  const double dn = static_cast<double>(data.n());
  const int m = fit.tms;

  const GVector g = eval_component(fit.component, fit.coefficients);
  PenaltyEvaluation ev;
  if (m >= 1) ev = forward_penalty(g, m - 1);
  const Eigen::VectorXd yabs = data.y.cwiseAbs();

  for (Eigen::Index j = 0; j < p; ++j) {
    if (fit.coefficients[j] != 0.0) continue;
    const double pm1 = m == 0 ? 1.0 : leave_one_out(ev, g, m - 1, j);
    const double num = data.x.col(j).cwiseAbs().dot(yabs) / dn;
    if (!(fit.lambda * pm1 >= num)) return false;
  }
  return true;
}

}  // namespace fridge

#include "fridge/penalty.hpp"

#include <cmath>
#include <string>

#include "fridge/errors.hpp"

namespace fridge {

namespace {

void validate_g(const GVector& g) {
  if (g.size() < 1) {
    throw InvalidInputError("g must have length >= 1");
  }
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i]) || g[i] < 0.0) {
      throw InvalidInputError("g[" + std::to_string(i) +
                              "] must be finite and nonnegative, got " +
                              std::to_string(g[i]));
    }
  }
}

void validate_order(const GVector& g, int m) {
  if (m < 0 || m >= g.size()) {
    throw InvalidInputError("penalty order m = " + std::to_string(m) +
                            " must satisfy 0 <= m < p = " +
                            std::to_string(g.size()));
  }
}

void validate_index(const GVector& g, Eigen::Index j) {
  if (j < 0 || j >= g.size()) {
    throw InvalidInputError("index " + std::to_string(j) +
                            " out of range for p = " + std::to_string(g.size()));
  }
}

}  // namespace

PenaltyEvaluation forward_penalty(const GVector& g, int m) {
  validate_g(g);
  validate_order(g, m);
  const Eigen::Index p = g.size();

  PenaltyEvaluation ev;
  ev.order = m;
  ev.p_values.resize(m + 1);
  ev.v_values.resize(p, m + 1);
  std::int64_t ops = 0;

  ev.v_values.col(0) = g;
  double sum = g[0];
  for (Eigen::Index i = 1; i < p; ++i) sum += g[i];
  ops += p - 1;
  ev.p_values[0] = sum;

  for (int k = 1; k <= m; ++k) {
    const double prev = ev.p_values[k - 1];
    const auto vprev = ev.v_values.col(k - 1);
    auto vk = ev.v_values.col(k);
    for (Eigen::Index j = 0; j < p; ++j) {
      double t = prev - vprev[j];
      if (t < 0.0) t = 0.0;  // cancellation clamp: true value is nonnegative
      vk[j] = t * g[j];
    }
    ops += 2 * p;
    double s = vk[0];
    for (Eigen::Index j = 1; j < p; ++j) s += vk[j];
    ops += p - 1;
    s /= static_cast<double>(k + 1);
    ops += 1;
    ev.p_values[k] = s;
  }

  if (!ev.p_values.allFinite() || !ev.v_values.allFinite()) {
    throw OverflowError("forward recursion produced a non-finite value; "
                        "operate on standardized-scale coefficients");
  }
  ev.op_count = ops;
  return ev;
}

double leave_one_out(const PenaltyEvaluation& eval, const GVector& g, int k,
                     Eigen::Index j) {
  if (k == -1) return 1.0;  // empty-product convention
  validate_index(g, j);
  if (k < 0 || k > eval.order) {
    throw InvalidInputError("leave_one_out order k = " + std::to_string(k) +
                            " must satisfy -1 <= k <= " +
                            std::to_string(eval.order));
  }
  const double gj = g[j];
  double q_prev = 1.0;  // P_{-1}(g_{-j})
  double q = 0.0;
  for (int i = 0; i <= k; ++i) {
    q = eval.p_values[i] - gj * q_prev;
    if (q < 0.0) q = 0.0;
    q_prev = q;
  }
  return q;
}

Eigen::VectorXd penalty_gradient(const GVector& g, int m) {
  validate_g(g);
  validate_order(g, m);
  const Eigen::Index p = g.size();
  if (m == 0) return Eigen::VectorXd::Ones(p);

  const PenaltyEvaluation ev = forward_penalty(g, m - 1);
  Eigen::VectorXd grad(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    grad[j] = leave_one_out(ev, g, m - 1, j);
  }
  return grad;
}

double penalty_hessian_entry(const GVector& g, int m, Eigen::Index j,
                             Eigen::Index r) {
  validate_g(g);
  validate_order(g, m);
  validate_index(g, j);
  validate_index(g, r);
  if (j == r) return 0.0;
  if (m == 1) return 1.0;  // P_{-1}(g_{-(j,r)})

  const PenaltyEvaluation ev = forward_penalty(g, m - 2);
  // First remove j, then remove r from the (p-1)-vector.
  const double gj = g[j];
  const double gr = g[r];
  double q_prev = 1.0, s_prev = 1.0, s = 1.0;
  for (int i = 0; i <= m - 2; ++i) {
    double q = ev.p_values[i] - gj * q_prev;
    if (q < 0.0) q = 0.0;
    s = q - gr * s_prev;
    if (s < 0.0) s = 0.0;
    q_prev = q;
    s_prev = s;
  }
  return s;
}

double backward_penalty(const GVector& g, int k) {
  validate_g(g);
  const Eigen::Index p = g.size();
  if (k < 1 || k > p) {
    throw InvalidInputError("backward index k = " + std::to_string(k) +
                            " must satisfy 1 <= k <= p = " + std::to_string(p));
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (g[i] < kBackwardPositivityFloor) {
      throw DegenerateInputError(
          "backward recursion requires strictly positive entries; g[" +
          std::to_string(i) + "] = " + std::to_string(g[i]) +
          " is below the positivity floor");
    }
  }

  double s = g.prod();  // S_{p,1}
  if (!std::isfinite(s)) {
    throw OverflowError("backward recursion overflowed on the full product");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p);  // V_{p,1}
  for (int step = 2; step <= k; ++step) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      double t = (s - v[j]) / g[j];
      if (t < 0.0) t = 0.0;
      v[j] = t;
      total += t;
    }
    s = total / static_cast<double>(step - 1);
    if (!std::isfinite(s)) {
      throw OverflowError("backward recursion produced a non-finite value");
    }
  }
  return s;
}

Eigen::VectorXd irl_weights(const GVector& g, int m) {
  validate_g(g);
  validate_order(g, m);
  const Eigen::Index p = g.size();
  if (m == 0) return Eigen::VectorXd::Ones(p);

  const PenaltyEvaluation ev = forward_penalty(g, m - 1);
  const double pm1 = ev.p_values[m - 1];
  Eigen::VectorXd w(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double wj = pm1 - ev.v_values(j, m - 1);
    if (wj < 0.0) wj = 0.0;
    w[j] = wj;
  }
  return w;
}

void PenaltyState::reset(const GVector& g, int m) {
  m_ = m;
  const Eigen::Index p = g.size();
  p_.resize(m + 1);
  loo_.resize(m + 1);
  scratch_ = g;
  p_[0] = g.sum();
  for (int k = 1; k <= m; ++k) {
    const double prev = p_[k - 1];
    double total = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      double t = prev - scratch_[j];
      if (t < 0.0) t = 0.0;
      t *= g[j];
      scratch_[j] = t;
      total += t;
    }
    p_[k] = total / static_cast<double>(k + 1);
  }
  if (!p_.allFinite()) {
    throw OverflowError("penalty state recursion produced a non-finite value");
  }
}

void PenaltyState::downdate(double g_j) {
  double q_prev = 1.0;
  for (int k = 0; k <= m_; ++k) {
    double q = p_[k] - g_j * q_prev;
    if (q < 0.0) q = 0.0;
    loo_[k] = q;
    q_prev = q;
  }
}

void PenaltyState::update(double g_j_new) {
  double q_prev = 1.0;
  for (int k = 0; k <= m_; ++k) {
    p_[k] = loo_[k] + g_j_new * q_prev;
    q_prev = loo_[k];
  }
}

}  // namespace fridge

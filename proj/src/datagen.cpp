#include "fridge/datagen.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "fridge/errors.hpp"
#include "fridge/rng.hpp"

#include <nlohmann/json.hpp>

namespace fridge {

namespace {

// D1 structure: 0-based indices of the three exact linear combinations.
constexpr Eigen::Index kD1Combo1 = 3;   // X4
constexpr Eigen::Index kD1Combo2 = 7;   // X8
constexpr Eigen::Index kD1Combo3 = 11;  // X12

bool is_d1_combination(Eigen::Index j) {
  return j == kD1Combo1 || j == kD1Combo2 || j == kD1Combo3;
}

Eigen::MatrixXd d1_covariance(Eigen::Index p) {
  // Base predictors are iid standard normal; the combination columns add
  // the cross terms implied by their defining weights.
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(p, p);
  const auto add_combo = [&](Eigen::Index target,
                             std::initializer_list<std::pair<Eigen::Index, double>>
                                 weights) {
    double var = 0.0;
    for (const auto& [src, w] : weights) {
      cov(target, src) = cov(src, target) = w;  // Cov(sum w_k Z_k, Z_j) = w_j
      var += w * w;
    }
    cov(target, target) = var;
  };
  add_combo(kD1Combo1, {{0, -0.65}, {1, -0.65}, {2, -0.65}});
  add_combo(kD1Combo2, {{4, -1.0 / 3.0}, {5, -1.0 / 2.0}, {6, -2.0 / 3.0}});
  add_combo(kD1Combo3, {{8, -0.5}, {9, -0.5}, {10, -0.5}});
  return cov;
}

Eigen::MatrixXd d2_covariance(Eigen::Index p) {
  Eigen::MatrixXd cov(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double lag = static_cast<double>(std::abs(i - j));
      const double ar1 = std::pow(0.5, lag);
      const double equi = i == j ? 1.0 : 0.5;
      cov(i, j) = 0.5 * (ar1 + equi);
    }
  }
  return cov;
}

}  // namespace

std::vector<Eigen::Index> SimScenario::support() const {
  std::vector<Eigen::Index> s;
  for (Eigen::Index j = 0; j < true_beta.size(); ++j) {
    if (true_beta[j] != 0.0) s.push_back(j);
  }
  return s;
}

SimScenario make_scenario_d1(Eigen::Index p, std::uint64_t seed) {
  if (p < 13) {
    throw InvalidInputError("D1 requires p >= 13");
  }
  SimScenario sc;
  sc.name = "D1";
  sc.p = p;
  sc.seed = seed;
  sc.cov_x = d1_covariance(p);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  beta[kD1Combo1] = 2.0;
  beta[kD1Combo2] = 2.0;
  beta[kD1Combo3] = 2.0;
  beta[12] = 0.75;  // X13

  // sigma^2 = 1 fixed; rescale beta so that b' Cov(X) b = 1.
  auto [calibrated, sigma2] =
      calibrate_snr(beta, sc.cov_x, SnrMode::kScaleBeta, 1.0);
  sc.true_beta = std::move(calibrated);
  sc.noise_variance = sigma2;
  sc.r2_theo = theoretical_r2(sc.true_beta, sc.cov_x, sc.noise_variance);
  return sc;
}

SimScenario make_scenario_d2(Eigen::Index p, std::uint64_t seed,
                             bool random_block) {
  if (p < 20) {
    throw InvalidInputError("D2 requires p >= 20");
  }
  SimScenario sc;
  sc.name = "D2";
  sc.p = p;
  sc.seed = seed;
  sc.cov_x = d2_covariance(p);

  auto rng = make_rng(seed, 0xD2B10C);
  Eigen::Index block_start = 0;
  if (random_block) {
    std::uniform_int_distribution<Eigen::Index> dist(0, p - 20);
    block_start = dist(rng);
  }
  std::vector<Eigen::Index> block(20);
  std::iota(block.begin(), block.end(), block_start);
  std::shuffle(block.begin(), block.end(), rng);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int k = 0; k < 10; ++k) {
    const double sign = coin(rng) == 0 ? -1.0 : 1.0;
    beta[block[k]] = sign * static_cast<double>(k + 1);
  }

  // Coefficients stay fixed; the noise variance absorbs the calibration.
  auto [calibrated, sigma2] =
      calibrate_snr(beta, sc.cov_x, SnrMode::kSetNoise);
  sc.true_beta = std::move(calibrated);
  sc.noise_variance = sigma2;
  sc.r2_theo = theoretical_r2(sc.true_beta, sc.cov_x, sc.noise_variance);
  return sc;
}

SimData draw_scenario(const SimScenario& scenario, Eigen::Index n,
                      std::uint64_t seed) {
  if (n < 1) {
    throw InvalidInputError("draw_scenario requires n >= 1");
  }
  const Eigen::Index p = scenario.p;
  SimData out;
  out.scenario = scenario;
  out.scenario.n = n;
  out.x.resize(n, p);

  auto rng = make_rng(seed, 0xD3A7A);
  std::normal_distribution<double> normal(0.0, 1.0);

  if (scenario.name == "D1") {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (is_d1_combination(j)) continue;
      for (Eigen::Index i = 0; i < n; ++i) out.x(i, j) = normal(rng);
    }
    out.x.col(kD1Combo1) =
        -0.65 * (out.x.col(0) + out.x.col(1) + out.x.col(2));
    out.x.col(kD1Combo2) = -out.x.col(4) / 3.0 - out.x.col(5) / 2.0 -
                           2.0 * out.x.col(6) / 3.0;
    out.x.col(kD1Combo3) =
        -0.5 * (out.x.col(8) + out.x.col(9) + out.x.col(10));
  } else if (scenario.name == "D2") {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scenario.cov_x);
    if (eig.info() != Eigen::Success) {
      throw LinearAlgebraError("covariance eigendecomposition failed");
    }
    const Eigen::MatrixXd root =
        eig.eigenvectors() *
        eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
        eig.eigenvectors().transpose();
    Eigen::MatrixXd z(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) z(i, j) = normal(rng);
    }
    out.x = z * root;  // root is symmetric
  } else {
    throw InvalidInputError("unknown scenario '" + scenario.name + "'");
  }

  const double noise_sd = std::sqrt(scenario.noise_variance);
  out.y = out.x * scenario.true_beta;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.y[i] += noise_sd * normal(rng);
  }
  return out;
}

SimData gen_d1(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  const SimScenario sc = make_scenario_d1(p, substream_seed(seed, 1));
  return draw_scenario(sc, n, substream_seed(seed, 2));
}

SimData gen_d2(Eigen::Index n, Eigen::Index p, std::uint64_t seed,
               bool random_block) {
  const SimScenario sc =
      make_scenario_d2(p, substream_seed(seed, 1), random_block);
  return draw_scenario(sc, n, substream_seed(seed, 2));
}

std::pair<Eigen::VectorXd, double> calibrate_snr(const Eigen::VectorXd& beta,
                                                 const Eigen::MatrixXd& cov_x,
                                                 SnrMode mode,
                                                 double target_sigma2) {
  if (cov_x.rows() != cov_x.cols() || cov_x.rows() != beta.size()) {
    throw InvalidInputError("calibrate_snr dimensions do not conform");
  }
  const double quad = beta.dot(cov_x * beta);
  if (!(quad > 0.0)) {
    throw CalibrationError("zero signal: b' Cov(X) b = 0");
  }
  if (mode == SnrMode::kSetNoise) {
    return {beta, quad};
  }
  if (!(target_sigma2 > 0.0)) {
    throw InvalidInputError("target sigma^2 must be positive");
  }
  const double c = std::sqrt(target_sigma2 / quad);
  return {c * beta, target_sigma2};
}

double theoretical_r2(const Eigen::VectorXd& beta, const Eigen::MatrixXd& cov_x,
                      double sigma2) {
  if (sigma2 < 0.0) {
    throw InvalidInputError("sigma^2 must be >= 0");
  }
  const double quad = beta.dot(cov_x * beta);
  if (quad == 0.0 && sigma2 == 0.0) {
    throw InvalidInputError("R^2 undefined: zero signal and zero noise");
  }
  return quad / (quad + sigma2);
}

void export_scenario(const SimData& data, const std::filesystem::path& csv_path,
                     const std::filesystem::path& json_path) {
  write_csv(data.dataset(), csv_path);

  nlohmann::json j;
  j["scenario"] = data.scenario.name;
  j["n"] = data.x.rows();
  j["p"] = data.scenario.p;
  j["seed"] = data.scenario.seed;
  j["noise_variance"] = data.scenario.noise_variance;
  j["r2_theo"] = data.scenario.r2_theo;
  j["true_beta"] = std::vector<double>(
      data.scenario.true_beta.data(),
      data.scenario.true_beta.data() + data.scenario.true_beta.size());
  std::vector<Eigen::Index> support = data.scenario.support();
  j["support"] = std::vector<std::int64_t>(support.begin(), support.end());

  std::ofstream out(json_path);
  if (!out) {
    throw SchemaError("cannot write '" + json_path.string() + "'");
  }
  out << j.dump(2) << '\n';
}

}  // namespace fridge

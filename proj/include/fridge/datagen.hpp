#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fridge/dataset.hpp"

namespace fridge {

/// A fully specified data-generating process: true coefficients, analytic
/// predictor covariance, noise variance, and the seed the scenario was
/// derived from. Generated scenarios satisfy
///   r2_theo = b' Cov(X) b / (b' Cov(X) b + sigma^2) = 0.5
/// exactly.
struct SimScenario {
  std::string name;  ///< "D1" or "D2"
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Eigen::VectorXd true_beta;
  Eigen::MatrixXd cov_x;
  double noise_variance = 0.0;
  double r2_theo = 0.0;
  std::uint64_t seed = 0;

  std::vector<Eigen::Index> support() const;
};

struct SimData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  SimScenario scenario;

  Dataset dataset() const { return make_dataset(x, y); }
};

/// D1 process description (true model size 4). Nine base predictors and
/// X13 plus the p-13 noise predictors are iid standard normal; X4, X8 and
/// X12 are exact linear combinations:
///   X4 = -0.65 (X1 + X2 + X3),
///   X8 = -X5/3 - X6/2 - 2 X7/3,
///   X12 = -0.5 (X9 + X10 + X11),
/// and the signal is c (2 X4 + 2 X8 + 2 X12 + 0.75 X13) with c chosen so
/// that b' Cov(X) b = 1 while sigma^2 = 1 stays fixed.
SimScenario make_scenario_d1(Eigen::Index p, std::uint64_t seed);

/// D2 process description: predictor covariance is the average of AR(1)
/// and equicorrelation structures (both rho = 0.5, unit diagonal); 10
/// indices inside a 20-predictor block carry coefficients with magnitudes
/// 1..10 and independent random signs; the noise variance is set to
/// b' Cov(X) b. random_block draws a seed-random contiguous block instead
/// of the default 1..20.
SimScenario make_scenario_d2(Eigen::Index p, std::uint64_t seed,
                             bool random_block = false);

/// Draws (X, y) rows from an existing scenario on its own substream.
SimData draw_scenario(const SimScenario& scenario, Eigen::Index n,
                      std::uint64_t seed);

/// Convenience: scenario plus a draw, on substreams of the given seed.
SimData gen_d1(Eigen::Index n, Eigen::Index p, std::uint64_t seed);
SimData gen_d2(Eigen::Index n, Eigen::Index p, std::uint64_t seed,
               bool random_block = false);

enum class SnrMode {
  kScaleBeta,  ///< rescale beta so that b' Cov(X) b equals the target sigma^2
  kSetNoise,   ///< keep beta, return sigma^2 = b' Cov(X) b
};

/// Calibrates the signal-to-noise ratio to one (r2_theo = 0.5). Returns the
/// (possibly rescaled) coefficients and the noise variance. Zero signal
/// (b' Cov(X) b = 0) raises CalibrationError.
std::pair<Eigen::VectorXd, double> calibrate_snr(const Eigen::VectorXd& beta,
                                                 const Eigen::MatrixXd& cov_x,
                                                 SnrMode mode,
                                                 double target_sigma2 = 1.0);

/// b' Cov(X) b / (b' Cov(X) b + sigma^2).
double theoretical_r2(const Eigen::VectorXd& beta, const Eigen::MatrixXd& cov_x,
                      double sigma2);

/// Writes the draw as CSV (x1..xp, y) plus a JSON sidecar with the true
/// coefficients, support, noise variance and seed.
void export_scenario(const SimData& data, const std::filesystem::path& csv_path,
                     const std::filesystem::path& json_path);

}  // namespace fridge

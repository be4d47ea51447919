#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fridge/dataset.hpp"
#include "fridge/solvers.hpp"

namespace fridge {

/// Lower end of every lambda grid.
inline constexpr double kLambdaGridFloor = 1e-8;

/// n_points log-linearly spaced values on [1e-8, lambda_max], ascending,
/// endpoints exact. n_points = 1 degenerates to {lambda_max}.
Eigen::VectorXd lambda_grid(double lambda_max, int n_points = 100);

/// Deterministic k-fold partition: fold_of[i] is the fold of row i.
struct FoldPlan {
  int k = 0;
  std::vector<int> fold_of;
};

FoldPlan make_folds(Eigen::Index n, int k, std::uint64_t seed);

struct CvResult {
  Eigen::VectorXd grid;
  Eigen::VectorXd mean_cv_error;  ///< per-lambda mean held-out MSE
  Eigen::VectorXd se_cv_error;    ///< per-lambda standard error across folds
  double best_lambda = 0.0;
  Eigen::Index best_index = 0;
  std::vector<int> fold_assignments;
};

/// k-fold cross-validation of the solution path over a fixed lambda grid.
/// Standardization is recomputed inside each training fold; held-out MSE is
/// measured on the raw scale against the observed responses. Ties on the
/// mean curve break toward the smallest lambda.
CvResult kfold_cv(const Dataset& data, int m, const Eigen::VectorXd& grid,
                  int k, std::uint64_t seed, const FitConfig& config,
                  int threads = 1);

/// kfold_cv with an explicit fold plan (replayable/auditable).
CvResult kfold_cv(const Dataset& data, int m, const Eigen::VectorXd& grid,
                  const FoldPlan& folds, const FitConfig& config,
                  int threads = 1);

struct ExtremeFit {
  int tms = 0;
  std::vector<Eigen::Index> support;  ///< |support| <= tms
  OlsFit ols_fit;                     ///< raw-scale coefficients + intercept
  double lambda_used = 0.0;
  bool path_tail_stable = false;
};

/// The lambda -> infinity limit, realized by an ascending warm-started path
/// to lambda_max followed by geometric continuation: lambda doubles until
/// the support has size <= m and is unchanged for 3 consecutive doublings,
/// or the 2^40 * lambda_max cap is hit (best-effort fit,
/// path_tail_stable = false). Returns the OLS refit on the terminal
/// support.
ExtremeFit extreme_fridge(const Dataset& data, int m, const FitConfig& config,
                          int base_grid_points = 25);

enum class TmsRule {
  kOneSe,  ///< smallest m no larger candidate beats by more than one SE
  kMin,    ///< plain argmin of the mean validation MSE
};

struct TmsSelection {
  std::vector<int> candidates;  ///< ascending
  Eigen::VectorXd mean_mse;
  Eigen::VectorXd se_mse;
  int recommended = 0;
};

/// Repeated split-sample validation of the extreme Fridge: each repeat
/// splits the rows into two equal halves (odd row counts train on the
/// extra row), fits extreme_fridge per candidate m on one half and
/// evaluates MSE on the other. m = 0 is the intercept-only model. The
/// default recommendation rule is one-standard-error: the smallest
/// candidate that no larger candidate improves upon by more than one SE.
TmsSelection select_tms(const Dataset& data, std::vector<int> m_candidates,
                        int repeats, std::uint64_t seed,
                        const FitConfig& config, TmsRule rule = TmsRule::kOneSe,
                        int threads = 1);

/// A refit procedure for the bootstrap: returns raw-scale coefficients and
/// intercept for a resampled dataset.
using FitProcedure = std::function<OlsFit(const Dataset&)>;

struct BootstrapSummary {
  int replicates = 0;             ///< successful replicates
  Eigen::VectorXd coefficient_se;
  double mse_mean = 0.0;          ///< only when a test set is supplied
  double mse_se = 0.0;
  std::vector<int> failed_replicates;
  Eigen::VectorXd replicate_mse;  ///< per successful replicate, test set only
};

/// Resamples rows with replacement B times and refits the full procedure
/// each time. Failing replicates are recorded and skipped; more than 10%
/// failures aborts with diagnostics.
BootstrapSummary bootstrap_se(const Dataset& data, const FitProcedure& procedure,
                              int B, std::uint64_t seed,
                              const Dataset* test_data = nullptr,
                              int threads = 1);

}  // namespace fridge

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roughnum/gaussian.hpp"
#include "roughnum/pvariation.hpp"
#include "roughnum/rde.hpp"

namespace roughnum {

enum class Statistic {
  NAlphaX,       ///< N_α(X)
  PVarX,         ///< ‖X‖_{p-var}
  NAlphaY,       ///< N_α(Y), Y solving the reference nonlinear RDE
  LogPVarY,      ///< log ‖Y‖_{p-var}, Y solving the reference linear RDE
  AbsIntegralG,  ///< |∫ G(X) dX| for the reference one-form
  PVarJ,         ///< ‖J‖_{p-var} (first level) of the reference Jacobian flow
};

[[nodiscard]] std::string to_string(Statistic s);
/// Inverse of to_string; throws ValidationError on unknown names.
[[nodiscard]] Statistic parse_statistic(const std::string& name);

/// V_1(y) = (sin y₂, cos y₁), V_2(y) = (cos y₂, -sin y₁) / 2 on R², with analytic
/// first and second derivatives.
[[nodiscard]] VectorFieldFamily reference_vector_fields();
/// A_1 = [[0, 1], [-1, 0]], A_2 = diag(1/2, -1/2), b_1 = (1/10, 0), b_2 = (0, 1/10).
[[nodiscard]] LinearField reference_linear_field();
/// G(x) = (sin x₂, cos x₁) as a one-form R² -> R.
[[nodiscard]] OneForm reference_one_form();
/// Starting point for the reference equations: (1, 0).
[[nodiscard]] Eigen::VectorXd reference_initial_state();

struct TrialConfig {
  GaussianModel model;
  double p = 2.5;
  double alpha = 1.0;
  std::size_t grid = 512;  // intervals
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::uint64_t first_trial = 0;  // trial indices first_trial .. first_trial + trials - 1
  Statistic statistic = Statistic::NAlphaX;
  PVarMode mode = PVarMode::LevelSplit;
  double q = 1.0;  // complementary regularity; predicted shape 2/q
  std::size_t workers = 0;

  [[nodiscard]] double predicted_shape() const { return 2.0 / q; }
  void validate() const;
};

struct TrialSample {
  std::vector<double> values;           // successful trials, in trial order
  std::vector<std::uint64_t> trials;    // trial index of each value
  std::vector<std::uint64_t> excluded;  // trials whose solver diverged
};

/// Value i depends only on (seed, first_trial + i).
[[nodiscard]] TrialSample run_trials(const TrialConfig& config);

struct TailFit {
  double shape = 0.0;
  double scale = 0.0;
  std::string method = "tail-regression";
  double tail_fraction = 0.10;
  double clip_fraction = 0.005;
  double shape_se = 0.0;
  std::size_t samples = 0;
  std::size_t tail_points = 0;  // distinct values used in the regression
  double mle_shape = 0.0;       // exceedance likelihood over the same threshold
};

/// Least squares of log(-log Ŝ(r)) on log r over the distinct sample values r
/// with clip_fraction <= Ŝ(r) <= tail_fraction. Needs at least 100 finite
/// samples and 10 distinct tail points, all positive.
[[nodiscard]] TailFit fit_weibull_shape(std::span<const double> samples, double tail_fraction = 0.10,
                                        double clip_fraction = 0.005);

struct SurvivalRow {
  double level = 0.0;
  double survival = 0.0;
};

/// Ŝ(r) = fraction of samples > r.
[[nodiscard]] std::vector<SurvivalRow> survival_table(std::span<const double> samples, std::span<const double> levels);
/// Levels at the given upper quantiles of the sample (e.g. 0.5, 0.9, 0.99).
[[nodiscard]] std::vector<double> quantile_levels(std::span<const double> samples, std::span<const double> probs);

enum class TransferMap { NonlinearRde, RoughIntegral, LinearRde };

[[nodiscard]] std::string to_string(TransferMap m);

/// Per-batch maxima of the two monitored ratios
///   (N_α(y) + 1) / (N_α(x) + 1)   and   log(1 + |y|_∞) / (N_α(x) + 1).
/// Maxima over trials of (N(y)+1)/(N(x)+1), log(N(y)+1)/(N(x)+1) and
/// log(1+|y|_inf)/(N(x)+1). Linear equations only control N(y) through
/// exp(C N(x)), so for them the log form is the one with a constant.
struct TransferConstants {
  double count_ratio = 0.0;
  double log_count_ratio = 0.0;
  double growth_ratio = 0.0;
  std::size_t trials = 0;
  std::size_t excluded = 0;
};

/// Uses config.model, p, alpha, grid, trials, seed, first_trial and mode; the
/// statistic field is ignored.
[[nodiscard]] TransferConstants transfer_constants(const TrialConfig& config, TransferMap map);

}  // namespace roughnum

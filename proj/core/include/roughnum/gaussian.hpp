#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace roughnum {

enum class GaussianKind { Brownian, FractionalBrownian, StochasticHeat };

/// Driver family with independent identically distributed components.
///
/// Brownian and fBM live on [0, horizon]. The stochastic-heat model is the
/// spatial profile of the stationary hyper-viscous heat equation: a
/// stationary process on the torus [-π, π] with covariance
///   K_ε(x - y) = Σ_{k∈ℤ} cos(k(x - y)) / (1 + k² + ε² k⁴),
/// proportionality constant 1, truncated at |k| <= truncation.
struct GaussianModel {
  GaussianKind kind = GaussianKind::Brownian;
  double hurst = 0.5;
  double epsilon = 0.0;
  std::size_t truncation = 100000;
  std::size_t dimension = 2;
  double horizon = 1.0;

  [[nodiscard]] static GaussianModel brownian(std::size_t dimension = 2, double horizon = 1.0);
  [[nodiscard]] static GaussianModel fbm(double hurst, std::size_t dimension = 2, double horizon = 1.0);
  [[nodiscard]] static GaussianModel stochastic_heat(double epsilon, std::size_t dimension = 2,
                                                     std::size_t truncation = 100000);

  /// Lower and upper end of the index set.
  [[nodiscard]] double domain_start() const noexcept;
  [[nodiscard]] double domain_end() const noexcept;

  /// Uniform grid with `intervals` steps over the model's domain.
  [[nodiscard]] std::vector<double> uniform_grid(std::size_t intervals) const;

  /// Throws ValidationError on out-of-range parameters.
  void validate() const;
};

[[nodiscard]] std::string to_string(GaussianKind kind);

/// R(s, t) for one component.
[[nodiscard]] double covariance(const GaussianModel& model, double s, double t);

/// Σ_{|k| <= K} cos(kx) / (1 + k² + ε² k⁴).
[[nodiscard]] double she_kernel_series(double epsilon, double x, std::size_t truncation);

/// Analytic bound on the tail Σ_{|k| > K} of the series above (2 / K).
[[nodiscard]] double she_series_tail_bound(std::size_t truncation) noexcept;

/// Σ_{|k| <= K} cos(kx) / (1 + ε² k²), the partial kernel with a closed form.
[[nodiscard]] double she_partial_kernel_series(double epsilon, double x, std::size_t truncation);

/// π cosh((|x| - π)/ε) / (ε sinh(π/ε)) for ε > 0, x ∈ [-π, π].
[[nodiscard]] double she_kernel_closed_reference(double epsilon, double x);

/// Truncation error bound for the partial kernel: 2 / (ε² K).
[[nodiscard]] double she_partial_tail_bound(double epsilon, std::size_t truncation) noexcept;

/// Gram matrix R(t_i, t_j). Stationary models on uniform grids evaluate the
/// kernel once per lag.
[[nodiscard]] Eigen::MatrixXd covariance_matrix(const GaussianModel& model, std::span<const double> grid);

/// Samples of a Gaussian model on a fixed grid.
///
/// The Gram matrix is factorized once (Cholesky with diagonal jitter
/// escalating from 1e-12 to 1e-8 times the mean variance). Points with zero
/// variance, e.g. t = 0 for Brownian motion, are pinned at 0. Sample
/// (seed, trial) draws component c from the stream stream_key(seed, trial, c).
class GaussianSampler {
 public:
  GaussianSampler(const GaussianModel& model, std::vector<double> grid);

  [[nodiscard]] const GaussianModel& model() const noexcept { return model_; }
  [[nodiscard]] std::span<const double> grid() const noexcept { return grid_; }
  [[nodiscard]] double jitter() const noexcept { return jitter_; }

  /// Rows = grid points, columns = components.
  [[nodiscard]] Eigen::MatrixXd sample(std::uint64_t seed, std::uint64_t trial) const;

 private:
  GaussianModel model_;
  std::vector<double> grid_;
  std::vector<Eigen::Index> active_;  // grid indices with positive variance
  Eigen::MatrixXd factor_;            // lower triangular over active points
  double jitter_ = 0.0;
};

/// `count` independent samples for trials 0..count-1.
[[nodiscard]] std::vector<Eigen::MatrixXd> sample_paths(const GaussianModel& model, std::vector<double> grid,
                                                        std::size_t count, std::uint64_t seed);

}  // namespace roughnum

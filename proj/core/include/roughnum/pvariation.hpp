#pragma once

#include <cstddef>

#include "roughnum/control.hpp"
#include "roughnum/rough_path.hpp"

namespace roughnum {

/// Which quantity the p-variation dynamic program accumulates.
enum class PVarMode {
  Level1,          ///< Σ |x¹|^p, norm = (.)^{1/p}
  Level2,          ///< Σ |x²|^{p/2}, norm = (.)^{2/p}
  Homogeneous,     ///< Σ ‖x‖^p with the homogeneous-max group norm
  LevelSplit,      ///< Σ_k ‖x^{(k)}‖_{p/k-var}^{p/k}, norm = (.)^{1/p}
};

void require_rough_exponent(double p);

/// Largest Σ f(t_i, t_{i+1}) over grid dissections of the window, where f is
/// the per-block quantity selected by `mode` (for LevelSplit the sum of the
/// two single-level suprema). O(m²) in the number of window points.
[[nodiscard]] double p_variation_power(const Level2RoughPath& x, double p, Window window, PVarMode mode);

/// p_variation_power raised to the matching root (1/p, 2/p or 1/p).
[[nodiscard]] double p_variation(const Level2RoughPath& x, double p, Window window, PVarMode mode);
[[nodiscard]] double p_variation(const Level2RoughPath& x, double p, PVarMode mode);

/// p-variation of a plain R^e path (rows = grid points) with the Euclidean norm.
[[nodiscard]] double path_p_variation(const Eigen::MatrixXd& path, double p);

/// Control ω(s,t) = p_variation_power on [s,t], evaluated lazily. Forward
/// scans extend one dynamic-programming row per step.
///
/// ω_x corresponds to PVarMode::Homogeneous, ω̄_x to PVarMode::LevelSplit.
[[nodiscard]] Control control_from_rough_path(const Level2RoughPath& x, double p, PVarMode mode);

}  // namespace roughnum

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "roughnum/control.hpp"
#include "roughnum/group.hpp"

namespace roughnum {

/// Level-2 rough path sampled on a grid.
///
/// Internally the path keeps the running values x¹_{0,t_i} and x²_{0,t_i};
/// every pairwise increment is recovered through Chen's relation
///   x²_{ij} = x²_{0j} - x²_{0i} - x¹_{0i} ⊗ x¹_{ij}.
class Level2RoughPath {
 public:
  /// Chen-combines per-step group elements. `steps.size()` must equal
  /// grid.size() - 1.
  [[nodiscard]] static Level2RoughPath from_steps(std::vector<double> grid, std::span<const GroupElement> steps,
                                                  const Eigen::VectorXd& origin);

  [[nodiscard]] std::span<const double> grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t points() const noexcept { return grid_.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return d_; }
  [[nodiscard]] Window full_window() const noexcept { return {0, grid_.size() - 1}; }

  /// Starting point x_{t_0} in R^d (the first level is a path, not only increments).
  [[nodiscard]] const Eigen::VectorXd& origin() const noexcept { return origin_; }
  /// x_{t_i} = origin + x¹_{0,t_i}.
  [[nodiscard]] Eigen::VectorXd position(std::size_t i) const;

  [[nodiscard]] GroupElement increment(std::size_t i, std::size_t j) const;
  [[nodiscard]] GroupElement step(std::size_t i) const { return increment(i, i + 1); }

  /// Raw accessors used by the p-variation kernels: x¹_{0,t_i}[a] and x²_{0,t_i}(a, b).
  [[nodiscard]] double running1(std::size_t i, std::size_t a) const noexcept { return level1_[i * d_ + a]; }
  [[nodiscard]] double running2(std::size_t i, std::size_t a, std::size_t b) const noexcept {
    return level2_[(i * d_ + a) * d_ + b];
  }

  /// δ_λ applied to every increment.
  [[nodiscard]] Level2RoughPath dilated(double lambda) const;

  /// Path restricted to a window (re-based at window.first).
  [[nodiscard]] Level2RoughPath restricted(Window window) const;

 private:
  std::vector<double> grid_;
  std::size_t d_ = 0;
  Eigen::VectorXd origin_;
  std::vector<double> level1_;
  std::vector<double> level2_;
};

/// Canonical lift of the piecewise-linear interpolation of `samples`
/// (rows = grid points, columns = components): per step g¹ = Δ, g² = Δ⊗Δ/2.
[[nodiscard]] Level2RoughPath lift_piecewise_linear(std::vector<double> grid, const Eigen::MatrixXd& samples);

struct AlgebraResiduals {
  double chen = 0.0;       // max over checked triples of |x²_ik - x²_ij - x²_jk - x¹_ij ⊗ x¹_jk|
  double geometric = 0.0;  // max over checked pairs of the geometric defect
};

/// Exhaustive over all triples for up to 48 points; otherwise every pair
/// (i, j) with a random midpoint and all consecutive triples.
[[nodiscard]] AlgebraResiduals algebra_residuals(const Level2RoughPath& x);

}  // namespace roughnum

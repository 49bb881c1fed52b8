#pragma once

#include <cstddef>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "roughnum/gaussian.hpp"

namespace roughnum {

enum class RhoVarMethod {
  ExactFinest,  ///< ρ = 1: finest product dissection attains the grid supremum
  BruteForce,   ///< ρ > 1, every product dissection enumerated
  Greedy,       ///< ρ > 1 on larger grids: coordinate-ascent coarsening, a lower bound
};

[[nodiscard]] std::string to_string(RhoVarMethod method);

/// 2D ρ-variation of a covariance over products of grid dissections,
///   V = ( sup_{D, D'} Σ |R([s,t] x [u,v])|^ρ )^{1/ρ}.
struct RhoVarEstimate {
  double rho = 1.0;
  std::size_t grid_points = 0;
  double value = 0.0;
  RhoVarMethod method = RhoVarMethod::ExactFinest;
};

/// Grids with at most this many points are enumerated exhaustively for ρ > 1.
inline constexpr std::size_t kRhoBruteForceLimit = 12;

/// `covariance` is the Gram matrix R(t_i, t_j) on the grid.
[[nodiscard]] RhoVarEstimate rho_variation_2d(const Eigen::MatrixXd& covariance, double rho);
[[nodiscard]] RhoVarEstimate rho_variation_2d(const GaussianModel& model, std::span<const double> grid, double rho);

}  // namespace roughnum

#pragma once

#include <cstddef>
#include <vector>

#include "roughnum/control.hpp"

namespace roughnum {

/// Stopping indices of the greedy partition of a window at threshold α.
///
/// taus.front() is the window start and taus.back() the window end. Every
/// intermediate τ_{i+1} is the smallest grid index u > τ_i with
/// ω(τ_i, u) >= α; if no such index exists before the end, the sequence is
/// capped at the window end. `count` is the number of taus strictly before
/// the window end minus one, i.e. sup{ n : τ_n < t }.
struct GreedyPartition {
  double alpha = 0.0;
  std::vector<std::size_t> taus;
  std::size_t count = 0;
};

[[nodiscard]] GreedyPartition greedy_partition(const Control& omega, double alpha, Window window);
[[nodiscard]] GreedyPartition greedy_partition(const Control& omega, double alpha);

/// N_{α,[s,t]}(ω).
[[nodiscard]] std::size_t n_alpha(const Control& omega, double alpha, Window window);
[[nodiscard]] std::size_t n_alpha(const Control& omega, double alpha);

/// Largest Σ ω(t_i, t_{i+1}) over grid dissections of the window whose blocks
/// all satisfy ω <= α. When no such dissection exists (a single grid step
/// already exceeds α) the value is 0 and `admissible` is false.
struct AlphaVariation {
  double value = 0.0;
  bool admissible = true;
};

[[nodiscard]] AlphaVariation accumulated_alpha_variation(const Control& omega, double alpha, Window window);

}  // namespace roughnum

#pragma once

#include <cstdint>

namespace roughnum {

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream key for (seed, trial, component). Distinct triples give
/// statistically independent streams; the result does not depend on the
/// order in which streams are created.
[[nodiscard]] std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t component) noexcept;

/// Counter-based generator: the k-th output is mix64(key + k * golden).
/// Copyable, no hidden global state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on (0, 1].
  double uniform() noexcept { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (both variates used).
  double normal() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace roughnum

#include "roughnum/random.hpp"

#include <cmath>
#include <numbers>

namespace roughnum {

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t component) noexcept {
  std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
  h = mix64(h ^ (trial * 0x9e3779b97f4a7c15ULL + 0x13198a2e03707344ULL));
  h = mix64(h ^ (component * 0xc2b2ae3d27d4eb4fULL + 0xa4093822299f31d0ULL));
  return h;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace roughnum

#include "roughnum/greedy.hpp"

#include <limits>
#include <sstream>

#include "roughnum/errors.hpp"

namespace roughnum {

namespace {

void check_window(const Control& omega, double alpha, Window window) {
  if (!(alpha > 0.0)) {
    throw ValidationError("greedy_partition: alpha must be positive");
  }
  if (window.first >= window.last || window.last >= omega.points()) {
    std::ostringstream os;
    os << "greedy_partition: invalid window [" << window.first << ", " << window.last << "] on "
       << omega.points() << " grid points";
    throw ValidationError(os.str());
  }
}

}  // namespace

GreedyPartition greedy_partition(const Control& omega, double alpha, Window window) {
  check_window(omega, alpha, window);
  GreedyPartition result;
  result.alpha = alpha;
  result.taus.push_back(window.first);
  std::size_t current = window.first;
  while (current < window.last) {
    auto scan = omega.scan_from(current);
    std::size_t next = window.last;
    for (std::size_t u = current + 1; u <= window.last; ++u) {
      if (scan->advance() >= alpha) {
        next = u;
        break;
      }
    }
    result.taus.push_back(next);
    current = next;
  }
  result.count = result.taus.size() - 2;
  return result;
}

GreedyPartition greedy_partition(const Control& omega, double alpha) {
  return greedy_partition(omega, alpha, omega.full_window());
}

std::size_t n_alpha(const Control& omega, double alpha, Window window) {
  return greedy_partition(omega, alpha, window).count;
}

std::size_t n_alpha(const Control& omega, double alpha) { return n_alpha(omega, alpha, omega.full_window()); }

AlphaVariation accumulated_alpha_variation(const Control& omega, double alpha, Window window) {
  check_window(omega, alpha, window);
  const std::size_t m = window.last - window.first + 1;
  constexpr double kUnreachable = -std::numeric_limits<double>::infinity();
  // best[k]: largest admissible sum over dissections of [first, first + k].
  std::vector<double> best(m, kUnreachable);
  best[0] = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (best[i] == kUnreachable) {
      continue;
    }
    auto scan = omega.scan_from(window.first + i);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double w = scan->advance();
      if (w > alpha) {
        // Monotone in j by superadditivity: no longer block can be admissible.
        break;
      }
      if (best[i] + w > best[j]) {
        best[j] = best[i] + w;
      }
    }
  }
  if (best[m - 1] == kUnreachable) {
    return {0.0, false};
  }
  return {best[m - 1], true};
}

}  // namespace roughnum

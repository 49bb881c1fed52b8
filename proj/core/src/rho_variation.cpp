#include "roughnum/rho_variation.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "roughnum/errors.hpp"

namespace roughnum {

namespace {

double rect(const Eigen::MatrixXd& r, Eigen::Index s, Eigen::Index t, Eigen::Index u, Eigen::Index v) {
  return r(t, v) - r(s, v) - r(t, u) + r(s, u);
}

std::vector<Eigen::Index> points_from_mask(std::uint64_t mask, Eigen::Index n) {
  std::vector<Eigen::Index> pts{0};
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    if (mask & (std::uint64_t{1} << (i - 1))) {
      pts.push_back(i);
    }
  }
  pts.push_back(n - 1);
  return pts;
}

double brute_force(const Eigen::MatrixXd& r, double rho) {
  const Eigen::Index n = r.rows();
  const std::uint64_t masks = std::uint64_t{1} << (n - 2);
  double best = 0.0;
  Eigen::MatrixXd row_diff;
  for (std::uint64_t rm = 0; rm < masks; ++rm) {
    const auto rows = points_from_mask(rm, n);
    const auto nr = static_cast<Eigen::Index>(rows.size()) - 1;
    row_diff.resize(nr, n);
    for (Eigen::Index k = 0; k < nr; ++k) {
      row_diff.row(k) = r.row(rows[static_cast<std::size_t>(k) + 1]) - r.row(rows[static_cast<std::size_t>(k)]);
    }
    for (std::uint64_t cm = 0; cm < masks; ++cm) {
      const auto cols = points_from_mask(cm, n);
      double sum = 0.0;
      for (Eigen::Index k = 0; k < nr; ++k) {
        for (std::size_t l = 0; l + 1 < cols.size(); ++l) {
          sum += std::pow(std::abs(row_diff(k, cols[l + 1]) - row_diff(k, cols[l])), rho);
        }
      }
      best = std::max(best, sum);
    }
  }
  return best;
}

// Coordinate ascent: repeatedly drop the interior point (row or column) whose
// removal increases the sum most, until no removal helps.
double greedy_coarsening(const Eigen::MatrixXd& r, double rho) {
  const Eigen::Index n = r.rows();
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
  std::vector<Eigen::Index> cols = rows;

  auto total = [&]() {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      for (std::size_t l = 0; l + 1 < cols.size(); ++l) {
        sum += std::pow(std::abs(rect(r, rows[k], rows[k + 1], cols[l], cols[l + 1])), rho);
      }
    }
    return sum;
  };
  // Gain of removing rows[k] (interior): merged block minus the two blocks.
  auto row_gain = [&](std::size_t k) {
    double gain = 0.0;
    for (std::size_t l = 0; l + 1 < cols.size(); ++l) {
      const Eigen::Index u = cols[l], v = cols[l + 1];
      gain += std::pow(std::abs(rect(r, rows[k - 1], rows[k + 1], u, v)), rho) -
              std::pow(std::abs(rect(r, rows[k - 1], rows[k], u, v)), rho) -
              std::pow(std::abs(rect(r, rows[k], rows[k + 1], u, v)), rho);
    }
    return gain;
  };
  auto col_gain = [&](std::size_t l) {
    double gain = 0.0;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      const Eigen::Index s = rows[k], t = rows[k + 1];
      gain += std::pow(std::abs(rect(r, s, t, cols[l - 1], cols[l + 1])), rho) -
              std::pow(std::abs(rect(r, s, t, cols[l - 1], cols[l])), rho) -
              std::pow(std::abs(rect(r, s, t, cols[l], cols[l + 1])), rho);
    }
    return gain;
  };

  for (;;) {
    double best_gain = 1e-14;
    bool is_row = true;
    std::size_t best_index = 0;
    for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
      const double g = row_gain(k);
      if (g > best_gain) {
        best_gain = g;
        is_row = true;
        best_index = k;
      }
    }
    for (std::size_t l = 1; l + 1 < cols.size(); ++l) {
      const double g = col_gain(l);
      if (g > best_gain) {
        best_gain = g;
        is_row = false;
        best_index = l;
      }
    }
    if (best_index == 0) {
      break;
    }
    auto& axis = is_row ? rows : cols;
    axis.erase(axis.begin() + static_cast<std::ptrdiff_t>(best_index));
  }
  return total();
}

}  // namespace

std::string to_string(RhoVarMethod method) {
  switch (method) {
    case RhoVarMethod::ExactFinest:
      return "exact-finest";
    case RhoVarMethod::BruteForce:
      return "brute-force";
    case RhoVarMethod::Greedy:
      return "greedy";
  }
  return "unknown";
}

RhoVarEstimate rho_variation_2d(const Eigen::MatrixXd& covariance, double rho) {
  if (!(rho >= 1.0)) {
    throw ValidationError("rho_variation_2d: rho must be at least 1");
  }
  if (covariance.rows() != covariance.cols() || covariance.rows() < 2) {
    throw ValidationError("rho_variation_2d: need a square covariance on at least two points");
  }
  const Eigen::Index n = covariance.rows();
  RhoVarEstimate est;
  est.rho = rho;
  est.grid_points = static_cast<std::size_t>(n);
  if (rho == 1.0) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      for (Eigen::Index j = 0; j + 1 < n; ++j) {
        sum += std::abs(rect(covariance, i, i + 1, j, j + 1));
      }
    }
    est.value = sum;
    est.method = RhoVarMethod::ExactFinest;
    return est;
  }
  if (static_cast<std::size_t>(n) <= kRhoBruteForceLimit) {
    est.value = std::pow(brute_force(covariance, rho), 1.0 / rho);
    est.method = RhoVarMethod::BruteForce;
  } else {
    est.value = std::pow(greedy_coarsening(covariance, rho), 1.0 / rho);
    est.method = RhoVarMethod::Greedy;
  }
  return est;
}

RhoVarEstimate rho_variation_2d(const GaussianModel& model, std::span<const double> grid, double rho) {
  return rho_variation_2d(covariance_matrix(model, grid), rho);
}

}  // namespace roughnum

#include "roughnum_selftest/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "roughnum/errors.hpp"
#include "roughnum/gaussian.hpp"
#include "roughnum/greedy.hpp"
#include "roughnum/pvariation.hpp"
#include "roughnum/random.hpp"
#include "roughnum/rde.hpp"
#include "roughnum/rough_path.hpp"
#include "roughnum/tails.hpp"

namespace roughnum::selftest {

namespace {

constexpr double kTol = 1e-9;

// ω(i,j) = (F_j - F_i)^power with nonnegative random increments of F.
Control power_control(CounterRng& rng, std::size_t points, double power) {
  std::vector<double> grid(points), level(points, 0.0);
  for (std::size_t i = 0; i < points; ++i) grid[i] = static_cast<double>(i);
  for (std::size_t i = 1; i < points; ++i) level[i] = level[i - 1] + rng.uniform();
  std::vector<double> table(points * points, 0.0);
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = i; j < points; ++j) table[i * points + j] = std::pow(level[j] - level[i], power);
  }
  return build_table_control(grid, table);
}

Eigen::MatrixXd random_walk(CounterRng& rng, std::size_t points, std::size_t d) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 1; i < m.rows(); ++i) {
    for (Eigen::Index a = 0; a < m.cols(); ++a) m(i, a) = m(i - 1, a) + rng.normal();
  }
  return m;
}

std::vector<double> index_grid(std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i);
  return g;
}

SuiteResult greedy_blocks(std::uint64_t seed) {
  CounterRng rng(stream_key(seed, 1, 0));
  std::size_t bad = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const Control omega = power_control(rng, 6 + rep % 20, 1.0 + 2.0 * rng.uniform());
    const double alpha = 0.2 + 3.0 * rng.uniform();
    const auto part = greedy_partition(omega, alpha);
    const std::size_t end = omega.points() - 1;
    for (std::size_t k = 0; k + 1 < part.taus.size(); ++k) {
      const std::size_t a = part.taus[k], b = part.taus[k + 1];
      if (b < end && omega(a, b) < alpha) ++bad;
      for (std::size_t u = a + 1; u < b; ++u) {
        if (omega(a, u) >= alpha) ++bad;
      }
    }
    if (part.count + 2 != part.taus.size()) ++bad;
  }
  return {"greedy-blocks", bad == 0, std::to_string(bad) + " violations over 100 controls"};
}

SuiteResult inequality_checks(std::uint64_t seed) {
  CounterRng rng(stream_key(seed, 2, 0));
  std::size_t bad = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const Control omega = power_control(rng, 5 + rep % 24, 1.0 + 2.0 * rng.uniform());
    const double alpha = 0.1 + 2.0 * rng.uniform();
    const double beta = alpha * (1.0 + 4.0 * rng.uniform());
    const double lambda = std::ldexp(1.0, static_cast<int>(rng.next_u64() % 7) - 3);
    if (n_alpha(omega.scaled(lambda), alpha) != n_alpha(omega, alpha / lambda)) ++bad;
    const double na = static_cast<double>(n_alpha(omega, alpha));
    const double nb = static_cast<double>(n_alpha(omega, beta));
    if (na > beta / alpha * (2.0 * nb + 1.0) + kTol) ++bad;
  }
  return {"scaling-and-comparison", bad == 0, std::to_string(bad) + " violations over 200 instances"};
}

SuiteResult pvar_bruteforce(std::uint64_t seed) {
  CounterRng rng(stream_key(seed, 3, 0));
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t m = 4 + static_cast<std::size_t>(rep % 6);
    const auto x = lift_piecewise_linear(index_grid(m), random_walk(rng, m, 2));
    const double p = 2.1 + 0.8 * rng.uniform();
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << (m - 2)); ++mask) {
      double sum = 0.0;
      std::size_t last = 0;
      for (std::size_t k = 1; k < m; ++k) {
        if (k == m - 1 || (mask >> (k - 1)) & 1ULL) {
          sum += std::pow(homogeneous_norm(x.increment(last, k), HomNormKind::HomogeneousMax), p);
          last = k;
        }
      }
      best = std::max(best, sum);
    }
    const double dp = p_variation_power(x, p, x.full_window(), PVarMode::Homogeneous);
    worst = std::max(worst, std::abs(dp - best) / std::max(1.0, best));
  }
  std::ostringstream os;
  os << "max relative gap " << worst;
  return {"pvar-vs-enumeration", worst <= 1e-10, os.str()};
}

SuiteResult algebra(std::uint64_t seed) {
  const GaussianModel model = GaussianModel::brownian(2);
  const GaussianSampler sampler(model, model.uniform_grid(64));
  const std::vector<double> grid(sampler.grid().begin(), sampler.grid().end());
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto r = algebra_residuals(lift_piecewise_linear(grid, sampler.sample(seed, t)));
    worst = std::max({worst, r.chen, r.geometric});
  }
  std::ostringstream os;
  os << "max residual " << worst;
  return {"chen-geometric", worst <= 1e-12, os.str()};
}

SuiteResult she_identity() {
  constexpr std::size_t kTruncation = 100000;
  double worst_excess = -1.0;
  for (double eps : {0.25, 0.5, 1.0}) {
    for (int k = 0; k <= 10; ++k) {
      const double x = -std::numbers::pi + 2.0 * std::numbers::pi * k / 10.0;
      const double gap = std::abs(she_partial_kernel_series(eps, x, kTruncation) - she_kernel_closed_reference(eps, x));
      worst_excess = std::max(worst_excess, gap - she_partial_tail_bound(eps, kTruncation) - 1e-9);
    }
  }
  std::ostringstream os;
  os << "max excess over bound " << worst_excess;
  return {"she-closed-form", worst_excess <= 0.0, os.str()};
}

SuiteResult sampler_determinism(std::uint64_t seed) {
  const GaussianModel model = GaussianModel::fbm(0.4, 2);
  const GaussianSampler a(model, model.uniform_grid(32));
  const GaussianSampler b(model, model.uniform_grid(32));
  const bool same = a.sample(seed, 3) == b.sample(seed, 3) && a.sample(seed, 3) != a.sample(seed, 4);
  return {"sampler-determinism", same, same ? "repeatable and trial-dependent" : "mismatch"};
}

SuiteResult solver_exponential() {
  constexpr Eigen::Index kSteps = 10000;
  std::vector<double> grid(kSteps + 1);
  Eigen::MatrixXd path(kSteps + 1, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(kSteps);
    path(static_cast<Eigen::Index>(i), 0) = std::sin(3.0 * grid[i]);
  }
  const auto x = lift_piecewise_linear(grid, path);
  LinearField f;
  f.a = {Eigen::MatrixXd::Constant(1, 1, 1.0)};
  f.b = {Eigen::VectorXd::Zero(1)};
  const auto y = solve_linear_rde(f, x, Eigen::VectorXd::Constant(1, 1.0));
  const double exact = std::exp(path(kSteps, 0) - path(0, 0));
  const double err = std::abs(y.path(kSteps, 0) - exact) / exact;
  std::ostringstream os;
  os << "relative error " << err << " at mesh 1e-4";
  return {"linear-rde-exponential", err <= 1e-6, os.str()};
}

SuiteResult weibull_calibration(std::uint64_t seed) {
  CounterRng rng(stream_key(seed, 9, 0));
  std::vector<double> s(20000);
  for (double& v : s) v = std::sqrt(-std::log(rng.uniform()));
  const auto fit = fit_weibull_shape(s);
  std::vector<double> scaled = s;
  for (double& v : scaled) v *= 5.0;
  const auto refit = fit_weibull_shape(scaled);
  const bool ok = std::abs(fit.shape - 2.0) <= 0.2 && std::abs(refit.shape - fit.shape) <= 1e-9 * fit.shape;
  std::ostringstream os;
  os << "k = " << fit.shape << " (target 2), rescaled k = " << refit.shape;
  return {"weibull-calibration", ok, os.str()};
}

}  // namespace

std::vector<SuiteResult> run_all(std::uint64_t seed) {
  std::vector<std::function<SuiteResult()>> suites{
      [&] { return greedy_blocks(seed); },     [&] { return inequality_checks(seed); },
      [&] { return pvar_bruteforce(seed); },   [&] { return algebra(seed); },
      [] { return she_identity(); },           [&] { return sampler_determinism(seed); },
      [] { return solver_exponential(); },     [&] { return weibull_calibration(seed); },
  };
  std::vector<SuiteResult> out;
  for (auto& suite : suites) {
    try {
      out.push_back(suite());
    } catch (const std::exception& e) {
      out.push_back({"exception", false, e.what()});
    }
  }
  return out;
}

}  // namespace roughnum::selftest

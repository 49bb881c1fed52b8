#include <doctest.h>

#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "roughnum/errors.hpp"
#include "roughnum/gaussian.hpp"
#include "roughnum/random.hpp"
#include "roughnum/rho_variation.hpp"

using namespace roughnum;

TEST_CASE("closed-form covariances") {
  CHECK(covariance(GaussianModel::brownian(), 0.3, 0.7) == doctest::Approx(0.3));
  const auto half = GaussianModel::fbm(0.5);
  for (double s : {0.1, 0.4, 0.9}) {
    for (double t : {0.2, 0.5, 1.0}) CHECK(covariance(half, s, t) == doctest::Approx(std::min(s, t)));
  }
  CHECK_THROWS_AS(GaussianModel::fbm(0.3).validate(), ValidationError);
}

TEST_CASE("she kernel at the origin for epsilon = 0") {
  double reference = 1.0;  // k = 0
  for (long k = 1; k <= 10000000; ++k) reference += 2.0 / (1.0 + static_cast<double>(k) * static_cast<double>(k));
  const double value = covariance(GaussianModel::stochastic_heat(0.0), 0.0, 0.0);
  CHECK(value == doctest::Approx(3.153348).epsilon(1e-5));
  CHECK(std::abs(value - reference) <= she_series_tail_bound(100000));
  CHECK(reference == doctest::Approx(std::numbers::pi / std::tanh(std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("she closed form for the partial kernel") {
  for (double eps : {0.25, 0.5, 1.0}) {
    for (int k = 0; k < 50; ++k) {
      const double x = -std::numbers::pi + 2.0 * std::numbers::pi * (k + 0.5) / 50.0;
      const double gap = std::abs(she_partial_kernel_series(eps, x, 100000) - she_kernel_closed_reference(eps, x));
      CHECK(gap <= she_partial_tail_bound(eps, 100000) + 1e-9);
      CHECK(she_kernel_closed_reference(eps, x) == doctest::Approx(she_kernel_closed_reference(eps, -x)));
    }
  }
  CHECK(std::abs(she_partial_kernel_series(0.5, 1.0, 100000) - she_kernel_closed_reference(0.5, 1.0)) < 1e-4);
  const double eps = 0.5;
  CHECK(she_kernel_closed_reference(eps, std::numbers::pi) ==
        doctest::Approx(std::numbers::pi / (eps * std::sinh(std::numbers::pi / eps))));
  CHECK_THROWS_AS((void)she_kernel_closed_reference(0.0, 1.0), ValidationError);
  // tiny ε stays finite
  CHECK(std::isfinite(she_kernel_closed_reference(0.001, 0.5)));
}

TEST_CASE("gram matrices are positive semidefinite") {
  for (const auto& model : {GaussianModel::brownian(1), GaussianModel::fbm(0.4, 1), GaussianModel::fbm(0.8, 1),
                            GaussianModel::stochastic_heat(0.1, 1, 2000)}) {
    const auto grid = model.uniform_grid(64);
    const Eigen::MatrixXd r = covariance_matrix(model, grid);
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    for (std::size_t i = 0; i < grid.size(); i += 7) {
      for (std::size_t j = 0; j < grid.size(); j += 5) {
        CHECK(r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
              doctest::Approx(covariance(model, grid[i], grid[j])).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("sampling is deterministic per (seed, trial)") {
  const auto model = GaussianModel::brownian(2);
  const auto paths = sample_paths(model, model.uniform_grid(16), 3, 42);
  const auto again = sample_paths(model, model.uniform_grid(16), 3, 42);
  REQUIRE(paths.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(paths[i] == again[i]);
  CHECK(paths[0] != paths[1]);
  const GaussianSampler sampler(model, model.uniform_grid(16));
  CHECK(sampler.sample(42, 2) == paths[2]);
  CHECK(paths[0].row(0).isZero());
}

TEST_CASE("brownian increments have variance equal to the step") {
  const auto model = GaussianModel::brownian(1);
  const GaussianSampler sampler(model, model.uniform_grid(16));
  const std::size_t count = 10000;
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(16);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(16);
  for (std::size_t t = 0; t < count; ++t) {
    const Eigen::MatrixXd s = sampler.sample(11, t);
    for (Eigen::Index i = 0; i < 16; ++i) {
      const double inc = s(i + 1, 0) - s(i, 0);
      sum[i] += inc;
      sum_sq[i] += inc * inc;
    }
  }
  for (Eigen::Index i = 0; i < 16; ++i) {
    const double mean = sum[i] / count;
    const double var = sum_sq[i] / count - mean * mean;
    CHECK(var == doctest::Approx(1.0 / 16.0).epsilon(0.05));
    CHECK(std::abs(mean) < 4.0 * std::sqrt(1.0 / 16.0 / count));
  }
}

TEST_CASE("fbm increment variance scales with lag^{2H}") {
  const auto model = GaussianModel::fbm(0.4, 1);
  const GaussianSampler sampler(model, model.uniform_grid(256));
  std::vector<double> log_lag, log_var;
  std::vector<Eigen::MatrixXd> samples;
  for (std::size_t t = 0; t < 2000; ++t) samples.push_back(sampler.sample(13, t));
  for (Eigen::Index lag = 1; lag <= 64; lag *= 2) {
    double acc = 0.0;
    std::size_t n = 0;
    for (const auto& s : samples) {
      for (Eigen::Index i = 0; i + lag <= 256; i += lag) {
        const double d = s(i + lag, 0) - s(i, 0);
        acc += d * d;
        ++n;
      }
    }
    log_lag.push_back(std::log(static_cast<double>(lag) / 256.0));
    log_var.push_back(std::log(acc / static_cast<double>(n)));
  }
  const double mx = std::accumulate(log_lag.begin(), log_lag.end(), 0.0) / log_lag.size();
  const double my = std::accumulate(log_var.begin(), log_var.end(), 0.0) / log_var.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < log_lag.size(); ++k) {
    sxy += (log_lag[k] - mx) * (log_var[k] - my);
    sxx += (log_lag[k] - mx) * (log_lag[k] - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(0.8).epsilon(0.0625));  // 0.8 ± 0.05
}

TEST_CASE("counter generator streams") {
  CounterRng a(stream_key(1, 2, 3));
  CounterRng b(stream_key(1, 2, 3));
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(stream_key(1, 2, 3) != stream_key(1, 3, 2));
  CounterRng c(stream_key(9, 0, 0));
  double m = 0.0, v = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double z = c.normal();
    m += z;
    v += z * z;
  }
  CHECK(std::abs(m / 1e5) < 0.02);
  CHECK(v / 1e5 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("brownian 1-variation is the horizon") {
  for (std::size_t n : {4u, 16u, 100u}) {
    const auto model = GaussianModel::brownian(1);
    const auto est = rho_variation_2d(model, model.uniform_grid(n), 1.0);
    CHECK(est.value == doctest::Approx(1.0));
    CHECK(est.method == RhoVarMethod::ExactFinest);
  }
}

TEST_CASE("1-variation grows under refinement") {
  for (const auto& model : {GaussianModel::fbm(0.4, 1), GaussianModel::stochastic_heat(0.5, 1, 5000)}) {
    const double coarse = rho_variation_2d(model, model.uniform_grid(16), 1.0).value;
    const double fine = rho_variation_2d(model, model.uniform_grid(32), 1.0).value;
    CHECK(fine >= coarse - 1e-12);
  }
}

TEST_CASE("rho-variation brute force and greedy lower bound") {
  const auto model = GaussianModel::fbm(0.4, 1);
  for (std::size_t n : {3u, 5u, 7u}) {
    const Eigen::MatrixXd r = covariance_matrix(model, model.uniform_grid(n));
    const auto est = rho_variation_2d(r, 1.25);
    CHECK(est.method == RhoVarMethod::BruteForce);
    CHECK(est.value == doctest::Approx(oracle::brute_rho_variation(r, 1.25)).epsilon(1e-12));
  }
  const Eigen::MatrixXd big = covariance_matrix(model, model.uniform_grid(40));
  const auto greedy = rho_variation_2d(big, 1.25);
  CHECK(greedy.method == RhoVarMethod::Greedy);
  // any fixed product dissection is a lower bound for the supremum
  const Eigen::MatrixXd coarse = covariance_matrix(model, model.uniform_grid(8));
  CHECK(greedy.value >= oracle::brute_rho_variation(coarse, 1.25) - 1e-12);
}

TEST_CASE("fbm rho-variation at rho = 1/(2H) is stable across grids") {
  const auto model = GaussianModel::fbm(0.4, 1);
  std::vector<double> values;
  for (std::size_t n : {64u, 128u, 256u}) values.push_back(rho_variation_2d(model, model.uniform_grid(n), 1.25).value);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  CHECK(*hi / *lo <= 1.25);
}

TEST_CASE("she 1-variation stays bounded in epsilon and under refinement") {
  double sup128 = 0.0, sup256 = 0.0;
  for (double eps : {0.0, 0.1, 0.5, 1.0}) {
    const auto model = GaussianModel::stochastic_heat(eps, 1);
    const double v128 = rho_variation_2d(model, model.uniform_grid(128), 1.0).value;
    const double v256 = rho_variation_2d(model, model.uniform_grid(256), 1.0).value;
    CHECK(std::abs(v256 - v128) / v128 <= 0.1);
    sup128 = std::max(sup128, v128);
    sup256 = std::max(sup256, v256);
  }
  CHECK(std::abs(sup256 - sup128) / sup128 <= 0.1);
}

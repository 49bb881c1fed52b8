#include <doctest.h>

#include <random>

#include "roughnum/errors.hpp"
#include "roughnum/tails.hpp"

using namespace roughnum;

namespace {

// Inverse-transform Weibull(k, scale) draws from an independent generator.
std::vector<double> weibull(double k, double scale, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(n);
  for (double& v : out) v = scale * std::pow(-std::log1p(-u(rng)), 1.0 / k);
  return out;
}

TrialConfig small_config(Statistic s) {
  TrialConfig c;
  c.model = GaussianModel::brownian();
  c.grid = 64;
  c.trials = 100;
  c.seed = 5;
  c.statistic = s;
  return c;
}

}  // namespace

TEST_CASE("weibull calibration") {
  for (double k : {0.5, 1.0, 2.0}) {
    const auto fit = fit_weibull_shape(weibull(k, 1.0, 100000, 17));
    CHECK(std::abs(fit.shape - k) / k <= 0.07);
    CHECK(fit.scale == doctest::Approx(1.0).epsilon(0.1));
    CHECK(std::abs(fit.mle_shape - k) / k <= 0.1);
    CHECK(fit.shape_se > 0.0);
    CHECK(fit.samples == 100000);
  }
  const auto expo = fit_weibull_shape(weibull(1.0, 1.0, 100000, 18));
  CHECK(std::abs(expo.shape - 1.0) <= 0.07);
}

TEST_CASE("shape is invariant under rescaling") {
  auto s = weibull(2.0, 1.0, 5000, 19);
  const auto fit = fit_weibull_shape(s);
  for (double& v : s) v *= 5.0;
  const auto scaled = fit_weibull_shape(s);
  CHECK(scaled.shape == doctest::Approx(fit.shape).epsilon(1e-12));
  CHECK(scaled.scale == doctest::Approx(5.0 * fit.scale).epsilon(1e-10));
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS_AS((void)fit_weibull_shape(weibull(1.0, 1.0, 50, 1)), ValidationError);
  std::vector<double> ties(1000);
  for (std::size_t i = 0; i < ties.size(); ++i) ties[i] = static_cast<double>(i % 6);
  CHECK_THROWS_WITH_AS((void)fit_weibull_shape(ties), doctest::Contains("distinct tail points"), NumericFailure);
}

TEST_CASE("survival table") {
  const std::vector<double> s{1, 2, 3};
  const std::vector<double> at2{2.0};
  CHECK(survival_table(s, at2)[0].survival == doctest::Approx(1.0 / 3.0));
  const std::vector<double> below{0.5};
  CHECK(survival_table(s, below)[0].survival == 1.0);

  const auto sample = weibull(1.5, 2.0, 997, 23);
  std::vector<double> levels;
  for (int k = 0; k <= 40; ++k) levels.push_back(0.2 * k);
  const auto table = survival_table(sample, levels);
  const double lo = *std::min_element(sample.begin(), sample.end());
  const double hi = *std::max_element(sample.begin(), sample.end());
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::size_t above = 0;
    for (double v : sample) above += v > levels[i] ? 1 : 0;
    CHECK(table[i].survival == static_cast<double>(above) / 997.0);
    if (i > 0) CHECK(table[i].survival <= table[i - 1].survival);
    if (levels[i] < lo) CHECK(table[i].survival == 1.0);
    if (levels[i] >= hi) CHECK(table[i].survival == 0.0);
  }
}

TEST_CASE("trials are deterministic and batchable") {
  const auto c = small_config(Statistic::NAlphaX);
  const auto a = run_trials(c);
  const auto b = run_trials(c);
  CHECK(a.values == b.values);
  CHECK(a.values.size() == 100);
  CHECK(a.excluded.empty());
  for (double v : a.values) {
    CHECK(v >= 0.0);
    CHECK(v == std::floor(v));
  }
  auto tail = c;
  tail.first_trial = 60;
  tail.trials = 40;
  const auto t = run_trials(tail);
  CHECK(std::equal(t.values.begin(), t.values.end(), a.values.begin() + 60));
  CHECK(t.trials.front() == 60);
  auto threaded = c;
  threaded.workers = 4;
  CHECK(run_trials(threaded).values == a.values);
}

TEST_CASE("every statistic runs") {
  for (auto s : {Statistic::NAlphaX, Statistic::PVarX, Statistic::NAlphaY, Statistic::LogPVarY,
                 Statistic::AbsIntegralG, Statistic::PVarJ}) {
    auto c = small_config(s);
    c.trials = 5;
    const auto r = run_trials(c);
    CHECK(r.values.size() == 5);
    for (double v : r.values) CHECK(std::isfinite(v));
    CHECK(parse_statistic(to_string(s)) == s);
  }
  auto one_d = small_config(Statistic::NAlphaY);
  one_d.model = GaussianModel::brownian(1);
  CHECK_THROWS_AS((void)run_trials(one_d), ValidationError);
  auto bad_p = small_config(Statistic::NAlphaX);
  bad_p.p = 3.0;
  CHECK_THROWS_AS((void)run_trials(bad_p), ValidationError);
  CHECK(small_config(Statistic::NAlphaX).predicted_shape() == 2.0);
}

TEST_CASE("transfer constants are finite") {
  auto c = small_config(Statistic::NAlphaX);
  c.trials = 20;
  for (auto m : {TransferMap::NonlinearRde, TransferMap::RoughIntegral, TransferMap::LinearRde}) {
    const auto k = transfer_constants(c, m);
    CHECK(k.trials == 20);
    CHECK(std::isfinite(k.count_ratio));
    CHECK(k.count_ratio > 0.0);
    CHECK(k.log_count_ratio >= 0.0);
    CHECK(k.log_count_ratio < k.count_ratio);
    CHECK(std::isfinite(k.growth_ratio));
  }
}

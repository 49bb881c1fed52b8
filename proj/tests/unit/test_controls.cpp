#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "roughnum/control.hpp"
#include "roughnum/errors.hpp"
#include "roughnum/greedy.hpp"

using namespace roughnum;

namespace {

Control additive_on(std::size_t intervals) {
  const std::size_t n = intervals + 1;
  std::vector<double> grid(n), table(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(intervals);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) table[i * n + j] = grid[j] - grid[i];
  }
  return build_table_control(grid, table);
}

Control from(const oracle::Table& t) { return build_table_control(t.grid(), t.w); }

}  // namespace

TEST_CASE("additive control on three points") {
  const Control w = build_table_control({0.0, 0.5, 1.0}, {0, 0.5, 1.0, 0, 0, 0.5, 0, 0, 0});
  CHECK(w(0, 2) == doctest::Approx(1.0));
  CHECK(w(1, 1) == 0.0);
}

TEST_CASE("table validation") {
  CHECK_THROWS_WITH_AS(build_table_control({0.0, 1.0}, {0.0, -0.1, 0.0, 0.0}), doctest::Contains("negative value"),
                       ValidationError);
  CHECK_THROWS_AS(build_table_control({0.0, 0.0}, {0, 0, 0, 0}), ValidationError);
  // ω(0,1) + ω(1,2) = 2 > ω(0,2) = 1.5
  CHECK_THROWS_WITH_AS(build_table_control({0, 1, 2}, {0, 1, 1.5, 0, 0, 1, 0, 0, 0}),
                       doctest::Contains("(0, 1, 2)"), ValidationError);
}

TEST_CASE("powered additive tables pass the exhaustive scan") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 8;
  std::vector<double> level(n, 0.0), table(n * n, 0.0), grid(n);
  for (std::size_t i = 1; i < n; ++i) level[i] = level[i - 1] + u(rng);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = static_cast<double>(i);
    for (std::size_t j = i; j < n; ++j) table[i * n + j] = std::pow(level[j] - level[i], 2.0);
  }
  const Control w = build_table_control(grid, table);
  const auto report = check_superadditivity(w);
  CHECK(report.ok);
  CHECK(report.triples_checked == 120);  // C(8+2, 3) triples i <= j <= k
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) CHECK(w(i, j) <= w(i, k) + 1e-12);
    }
  }
}

TEST_CASE("greedy partition of the additive control") {
  const Control w = additive_on(20);
  const auto part = greedy_partition(w, 0.25);
  CHECK(part.taus == std::vector<std::size_t>{0, 5, 10, 15, 20});
  CHECK(part.count == 3);
  CHECK(n_alpha(w, 0.25) == 3);
  const auto none = greedy_partition(w, 2.0);
  CHECK(none.taus == std::vector<std::size_t>{0, 20});
  CHECK(none.count == 0);
  CHECK(n_alpha(w.scaled(2.0), 0.5) == 3);
}

TEST_CASE("greedy partition matches the literal scan on random controls") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 100; ++rep) {
    const auto t = oracle::random_superadditive(rng, 20);
    std::vector<double> entries;
    for (std::size_t i = 0; i < t.n; ++i) {
      for (std::size_t j = i + 1; j < t.n; ++j) entries.push_back(t(i, j));
    }
    std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(entries.size() / 2), entries.end());
    const double alpha = entries[entries.size() / 2];
    const auto expected = oracle::literal_greedy(t, alpha, 0, t.n - 1);
    const auto part = greedy_partition(from(t), alpha);
    CHECK(part.taus == expected);
    CHECK(part.count == oracle::literal_count(expected, t.n - 1));
  }
}

TEST_CASE("greedy on a sub-window") {
  std::mt19937_64 rng(3);
  const auto t = oracle::random_superadditive(rng, 16);
  const Control w = from(t);
  for (std::size_t s = 0; s < 10; ++s) {
    const auto expected = oracle::literal_greedy(t, 0.3, s, 14);
    CHECK(greedy_partition(w, 0.3, {s, 14}).taus == expected);
  }
}

TEST_CASE("accumulated alpha variation") {
  const Control w = additive_on(20);
  CHECK(accumulated_alpha_variation(w, 0.25, w.full_window()).value == doctest::Approx(1.0));
  CHECK(accumulated_alpha_variation(w, 2.0, w.full_window()).value == doctest::Approx(1.0));

  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const auto t = oracle::random_superadditive(rng, 8);
    const double alpha = 0.05 + t(0, 7) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double expected = oracle::brute_alpha_variation(t, alpha, 0, 7);
    const auto got = accumulated_alpha_variation(from(t), alpha, {0, 7});
    if (expected < 0.0) {
      CHECK_FALSE(got.admissible);
      CHECK(got.value == 0.0);
    } else {
      CHECK(got.admissible);
      CHECK(got.value == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("no admissible dissection when a single step exceeds alpha") {
  const Control w = build_table_control({0, 1, 2}, {0, 0.6, 1.2, 0, 0, 0.6, 0, 0, 0});
  const auto v = accumulated_alpha_variation(w, 0.5, w.full_window());
  CHECK_FALSE(v.admissible);
  CHECK(v.value == 0.0);
}

#include <benchmark/benchmark.h>

#include "roughnum/gaussian.hpp"
#include "roughnum/greedy.hpp"
#include "roughnum/pvariation.hpp"
#include "roughnum/rde.hpp"
#include "roughnum/rough_path.hpp"
#include "roughnum/tails.hpp"

using namespace roughnum;

namespace {

Level2RoughPath brownian_lift(std::size_t intervals, std::uint64_t trial = 0) {
  const auto model = GaussianModel::brownian(2);
  const GaussianSampler sampler(model, model.uniform_grid(intervals));
  return lift_piecewise_linear({sampler.grid().begin(), sampler.grid().end()}, sampler.sample(1, trial));
}

void BM_Sample(benchmark::State& state) {
  const auto model = GaussianModel::brownian(2);
  const GaussianSampler sampler(model, model.uniform_grid(static_cast<std::size_t>(state.range(0))));
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(1, trial++));
}
BENCHMARK(BM_Sample)->Arg(128)->Arg(512);

void BM_PVariation(benchmark::State& state) {
  const auto x = brownian_lift(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(p_variation(x, 2.5, PVarMode::LevelSplit));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PVariation)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNSquared);

void BM_NAlpha(benchmark::State& state) {
  const auto x = brownian_lift(static_cast<std::size_t>(state.range(0)));
  const Control w = control_from_rough_path(x, 2.5, PVarMode::LevelSplit);
  for (auto _ : state) benchmark::DoNotOptimize(n_alpha(w, 1.0));
}
BENCHMARK(BM_NAlpha)->Arg(128)->Arg(512);

void BM_SolveRde(benchmark::State& state) {
  const auto x = brownian_lift(static_cast<std::size_t>(state.range(0)));
  const auto fields = reference_vector_fields();
  for (auto _ : state) benchmark::DoNotOptimize(solve_rde(fields, x, reference_initial_state()));
}
BENCHMARK(BM_SolveRde)->Arg(512);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "lacunar/modulus.hpp"
#include "lacunar/phase.hpp"
#include "lacunar/series.hpp"

namespace {

void BM_ReducePhase(benchmark::State& state) {
  const auto n = lacunar::pow2(static_cast<std::uint64_t>(state.range(0))) + 12345;
  const auto t = lacunar::Angle::radians(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(lacunar::reduce_phase(n, t));
}
BENCHMARK(BM_ReducePhase)->Arg(32)->Arg(128)->Arg(1024);

void BM_SampleGrid(benchmark::State& state) {
  const auto spec = lacunar::example_double_exponential(1.0, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lacunar::sample_grid(spec, static_cast<std::uint64_t>(state.range(0))));
  }
}
BENCHMARK(BM_SampleGrid)->Arg(1021)->Arg(65521)->Unit(benchmark::kMillisecond);

void BM_GridModulus(benchmark::State& state) {
  const auto grid = lacunar::sample_grid(lacunar::example_geometric(1.0, 8), 65521);
  const auto deltas = lacunar::log_ladder(2 * 3.14159265358979 / 65521, 3.14159, 10);
  for (auto _ : state) benchmark::DoNotOptimize(lacunar::empirical_modulus_grid(grid, deltas));
}
BENCHMARK(BM_GridModulus)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

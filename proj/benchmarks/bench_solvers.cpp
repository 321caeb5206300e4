#include <benchmark/benchmark.h>

#include "cepflow/solvers.hpp"
#include "commands.hpp"

using namespace cepflow;

static void BM_EnumeratePaths(benchmark::State& state) {
  const SolveRequest req =
      cli::make_scale_instance(static_cast<int>(state.range(0)),
                               static_cast<int>(state.range(0)), 1, 1000);
  for (auto _ : state) {
    auto paths = enumerate_paths(req.graph);
    benchmark::DoNotOptimize(paths);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnumeratePaths)->DenseRange(4, 16, 4)->Complexity();

static void BM_SolveExact(benchmark::State& state) {
  SolveRequest req = cli::make_scale_instance(static_cast<int>(state.range(0)),
                                              static_cast<int>(state.range(0)), 1, 50);
  for (auto _ : state) {
    auto res = solve_exact(req);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_SolveExact)->DenseRange(3, 6, 1)->Unit(benchmark::kMillisecond);

static void BM_SolveGa(benchmark::State& state) {
  SolveRequest req = cli::make_scale_instance(static_cast<int>(state.range(0)),
                                              static_cast<int>(state.range(0)), 1, 1000);
  for (auto _ : state) {
    auto res = solve_ga(req);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_SolveGa)->DenseRange(3, 6, 1)->Unit(benchmark::kMillisecond);

static void BM_SolveHeuristics(benchmark::State& state) {
  SolveRequest req = cli::make_scale_instance(8, 8, 1, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_crrb(req));
    benchmark::DoNotOptimize(solve_random(req));
    benchmark::DoNotOptimize(solve_local(req));
  }
}
BENCHMARK(BM_SolveHeuristics);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "stackmfg/population.hpp"

using namespace stackmfg;

static void BM_FollowerRiccati(benchmark::State& state) {
  const ModelParams params;
  const TimeGrid grid(params.T, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto ric = solve_follower_riccati(params, grid, PopulationSize::limit());
    benchmark::DoNotOptimize(ric.P.at(0));
  }
}
BENCHMARK(BM_FollowerRiccati)->Arg(500)->Arg(2000);

static void BM_LeaderDecoupling(benchmark::State& state) {
  const ModelParams params;
  const TimeGrid grid(params.T, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto dec = solve_leader_decoupling(params, grid);
    benchmark::DoNotOptimize(dec.residual_sup);
  }
}
BENCHMARK(BM_LeaderDecoupling)->Arg(500)->Arg(2000);

static void BM_Ensemble(benchmark::State& state) {
  ModelParams params;
  SimConfig config;
  config.grid = TimeGrid(params.T, 500);
  config.n_paths = 8;
  const SolvedModel model = solve_model(params, config);
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto [ens, rep] = simulate_ensemble(model, config, N, {.n_threads = 1});
    benchmark::DoNotOptimize(rep.epsilon_N);
  }
}
BENCHMARK(BM_Ensemble)->Arg(25)->Arg(100);

BENCHMARK_MAIN();

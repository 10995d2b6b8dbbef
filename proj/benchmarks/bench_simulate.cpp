#include <benchmark/benchmark.h>

#include "driftwalk/asymptotics.hpp"
#include "driftwalk/inventory.hpp"
#include "driftwalk/simulate.hpp"

namespace {

// Walk-maximum sampling throughput, reported as simulated steps per second.
void BM_sample_LN(benchmark::State& state) {
  const long horizon = state.range(0);
  driftwalk::SimConfig cfg;
  cfg.paths = 2000;
  cfg.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(driftwalk::sample_LN(
        driftwalk::SupplyPolicy{0.5, 0.7}, driftwalk::DemandModel{0.0, 1.0},
        horizon, cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.paths * horizon);
}
BENCHMARK(BM_sample_LN)->Arg(100)->Arg(1000)->Arg(10000);

void BM_sample_rho(benchmark::State& state) {
  driftwalk::SimConfig cfg;
  cfg.paths = 2000;
  cfg.steps = state.range(0);
  cfg.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(driftwalk::sample_rho(0.5, cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.paths * cfg.steps);
}
BENCHMARK(BM_sample_rho)->Arg(1000)->Arg(10000);

void BM_spitzer_exact(benchmark::State& state) {
  const long horizon = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(driftwalk::spitzer_exact(1.0, 1.0, horizon));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_spitzer_exact)->Arg(10000)->Arg(1000000);

}  // namespace

#include <benchmark/benchmark.h>

#include "driftwalk/normal.hpp"

namespace {

void BM_pdf(benchmark::State& state) {
  double x = -4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(driftwalk::normal::pdf(x));
    x += 1e-7;
    if (x > 4.0) x = -4.0;
  }
}
BENCHMARK(BM_pdf);

void BM_ccdf(benchmark::State& state) {
  double x = -4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(driftwalk::normal::ccdf(x));
    x += 1e-7;
    if (x > 4.0) x = -4.0;
  }
}
BENCHMARK(BM_ccdf);

void BM_inv_ccdf(benchmark::State& state) {
  double q = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(driftwalk::normal::inv_ccdf(q));
    q += 1e-7;
    if (q > 1.0 - 1e-6) q = 1e-6;
  }
}
BENCHMARK(BM_inv_ccdf);

void BM_loss(benchmark::State& state) {
  double x = -8.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(driftwalk::normal::loss(x));
    x += 1e-7;
    if (x > 8.0) x = -8.0;
  }
}
BENCHMARK(BM_loss);

}  // namespace

BENCHMARK_MAIN();

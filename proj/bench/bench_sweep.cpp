// Serial reference sweep against the OpenMP sweep on one panel.

#include <benchmark/benchmark.h>

#include "bestab/sweep.hpp"

namespace {

const bestab::SweepRanges kRanges{};

void BM_SweepSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto g = bestab::sweep_serial(0.2, 5.0, kRanges, n, n);
    benchmark::DoNotOptimize(g.cells.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_SweepParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto g = bestab::sweep(0.2, 5.0, kRanges, n, n);
    benchmark::DoNotOptimize(g.cells.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
  state.counters["threads"] = bestab::sweep_thread_count();
}

void BM_Lambda(benchmark::State& state) {
  const bestab::HybridParams p{0.2, 5.0, 0.2, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(bestab::lambda(p).value);
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lambda)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary threads.

#include <benchmark/benchmark.h>

#include "dandelion/metrics.hpp"
#include "dandelion/oracle.hpp"

using namespace dandelion;

namespace {

void BM_ScanSerial(benchmark::State& state) {
  const GridSpec spec{static_cast<int>(state.range(0)), 1e-3, 10};
  for (auto _ : state) benchmark::DoNotOptimize(scan_rho_serial(0.4, 100, spec));
}

void BM_ScanParallel(benchmark::State& state) {
  const GridSpec spec{static_cast<int>(state.range(0)), 1e-3, 10};
  for (auto _ : state) benchmark::DoNotOptimize(scan_rho(0.4, 100, spec));
}

void BM_EnumerateSerial(benchmark::State& state) {
  const ModelConfig cfg = make_config(static_cast<int>(state.range(0)), 0.4, -0.26);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_serial(cfg));
}

void BM_EnumerateParallel(benchmark::State& state) {
  const ModelConfig cfg = make_config(static_cast<int>(state.range(0)), 0.4, -0.26);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(cfg));
}

void BM_SampleSerial(benchmark::State& state) {
  const ModelConfig cfg = make_config(100, 0.4, -0.26);
  for (auto _ : state) benchmark::DoNotOptimize(sample_serial(cfg, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleParallel(benchmark::State& state) {
  const ModelConfig cfg = make_config(100, 0.4, -0.26);
  for (auto _ : state) benchmark::DoNotOptimize(sample(cfg, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Arg(201)->Arg(2001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Arg(201)->Arg(2001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateSerial)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleSerial)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleParallel)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "systolab/pipeline.hpp"
#include "systolab/rootsys.hpp"

using namespace systolab;

static void BM_TableSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rootsys::table_N_serial(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TableSerial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_TableParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rootsys::table_N(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TableParallel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static pipeline::SweepConfig sweep_config(benchmark::State& state) {
  pipeline::SweepConfig c;
  c.prime_count = static_cast<std::size_t>(state.range(0));
  c.precision_bits = 256;
  return c;
}

static void BM_SweepSerial(benchmark::State& state) {
  auto c = sweep_config(state);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::sweep_serial(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SweepSerial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_SweepParallel(benchmark::State& state) {
  auto c = sweep_config(state);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::sweep(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SweepParallel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

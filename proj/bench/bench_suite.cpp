// Serial reference path versus the OpenMP point loop of the suite runner.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "hflat/catalog.hpp"
#include "hflat/suite.hpp"

namespace {

const char* kModels[] = {"hopf", "perturbed:seed=3,eps=0.15,dim=3", "lie:algebra=su2+su2,structure=central-ce"};

void run(benchmark::State& state, bool parallel) {
  const auto model = hflat::model_by_name(kModels[state.range(0)]);
  hflat::SuiteOptions opt;
  opt.count = static_cast<int>(state.range(1));
  opt.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(hflat::run_suite(model, opt));
  state.SetLabel(model.name);
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
  state.counters["points/s"] = benchmark::Counter(static_cast<double>(opt.count) * state.iterations(),
                                                  benchmark::Counter::kIsRate);
}

void BM_SuiteSerial(benchmark::State& state) { run(state, false); }
void BM_SuiteParallel(benchmark::State& state) { run(state, true); }

void args(benchmark::internal::Benchmark* b) {
  for (int m = 0; m < 3; ++m) b->Args({m, 64});
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_SuiteSerial)->Apply(args);
BENCHMARK(BM_SuiteParallel)->Apply(args);

BENCHMARK_MAIN();

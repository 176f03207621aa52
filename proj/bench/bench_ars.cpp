// Serial vs OpenMP experiment harness, plus the profiled objective and its
// gradient at the sizes the harness uses.

#include "ars/ars_model.hpp"
#include "ars/dynamics.hpp"
#include "ars/eval.hpp"
#include "ars/random.hpp"

#include <benchmark/benchmark.h>

namespace {

ars::ExperimentConfig bench_config(int system) {
  ars::ExperimentConfig cfg =
      system == 0 ? ars::ExperimentConfig::circular_defaults() : ars::ExperimentConfig::lorenz_defaults();
  cfg.instances = 4;
  return cfg;
}

void run(benchmark::State& state, ars::Execution execution) {
  const ars::ExperimentConfig cfg = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ars::run_experiment(cfg, execution));
  state.SetLabel(ars::to_string(cfg.system));
}

void BM_ExperimentSerial(benchmark::State& state) { run(state, ars::Execution::serial); }
void BM_ExperimentParallel(benchmark::State& state) { run(state, ars::Execution::parallel); }

BENCHMARK(BM_ExperimentSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExperimentParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

struct ObjectiveFixture {
  ars::ObservedSeries observed;
  ars::Vector slack;

  explicit ObjectiveFixture(ars::Index n)
      : observed(ars::split_observed(ars::gen_lorenz(n), {2, 1})), slack(n) {
    ars::NormalStream rng(1);
    for (ars::Index i = 0; i < n; ++i) slack[i] = rng.standard_normal();
  }
};

void BM_Objective(benchmark::State& state) {
  const ObjectiveFixture f(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ars::ars_objective(f.observed, f.slack, 1));
}

void BM_Gradient(benchmark::State& state) {
  const ObjectiveFixture f(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ars::ars_gradient(f.observed, f.slack, 1));
}

BENCHMARK(BM_Objective)->Arg(100)->Arg(1000);
BENCHMARK(BM_Gradient)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();

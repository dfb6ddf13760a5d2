#include <benchmark/benchmark.h>

#include "qfosc/experiments.hpp"
#include "qfosc/franckhertz.hpp"
#include "qfosc/integrator.hpp"
#include "qfosc/model.hpp"

using namespace qfosc;

static void BM_Rk4Step(benchmark::State& state) {
  OscState s{0.0, 5.0, 0.0};
  const ModelParams p{7.0};
  for (auto _ : state) {
    s = rk4_step(s, kDefaultStep, p);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rk4Step);

// One unit of nondimensional time (1000 steps), with and without noise.
static void BM_Integrate(benchmark::State& state) {
  IntegratorConfig cfg;
  if (state.range(0)) cfg.noise = NoiseSpec::gaussian(kStudySigma);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate({0.0, 5.0, 0.0}, {7.0}, cfg, 1.0));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Integrate)->Arg(0)->Arg(1);

static void BM_SettleRun(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(settle_sweep(std::vector<double>{3.0}, 0.0, {0.1}, {}, 100.0));
  }
}
BENCHMARK(BM_SettleRun)->Unit(benchmark::kMillisecond);

static void BM_ScatterOnce(benchmark::State& state) {
  ScatterConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scatter_once(1.8, cfg, 1.0));
  }
}
BENCHMARK(BM_ScatterOnce)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "cbank/sim.hpp"
#include "fixtures.hpp"

using namespace cbank;
using cbank::testing::canal7;
using cbank::testing::dtc_vessel;
using cbank::testing::reference_coefficients;

static void BM_Rk4Step(benchmark::State& state) {
  const CoefficientSet k = reference_coefficients();
  SimConfig cfg;
  cfg.x_in = 12.6;
  cfg.initial.y = 1.0;
  cfg.initial.u = 1.0;
  PlanarState s = cfg.initial;
  for (auto _ : state) {
    s = step(s, k, dtc_vessel(), canal7(), cfg);
    if (std::abs(s.y) > 2.4) s = cfg.initial;  // stay inside the domain
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rk4Step);

static void BM_TransitToGrounding(benchmark::State& state) {
  const CoefficientSet k = reference_coefficients();
  SimConfig cfg;
  cfg.x_in = 12.6;
  cfg.initial.y = 2.0;
  cfg.initial.u = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg, k, dtc_vessel(), canal7()));
  }
}
BENCHMARK(BM_TransitToGrounding)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

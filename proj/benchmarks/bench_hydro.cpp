#include <benchmark/benchmark.h>

#include "cbank/hydro.hpp"
#include "fixtures.hpp"

using namespace cbank;
using cbank::testing::canal7;
using cbank::testing::dtc_vessel;
using cbank::testing::reference_coefficients;

static void BM_Delta(benchmark::State& state) {
  const VesselGeometry vessel = dtc_vessel();
  const CanalGeometry canal = canal7();
  PlanarState s;
  s.y = 1.0;
  s.psi = 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta(s, vessel, canal));
  }
}
BENCHMARK(BM_Delta);

static void BM_BankForce(benchmark::State& state) {
  const VesselGeometry vessel = dtc_vessel();
  const CanalGeometry canal = canal7();
  PlanarState s;
  s.y = 1.0;
  s.psi = 0.2;
  s.u = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bank_force(s, 1.0, 1.07, 0.13, vessel, canal));
  }
}
BENCHMARK(BM_BankForce);

static void BM_PredictMeasuredForces(benchmark::State& state) {
  const VesselGeometry vessel = dtc_vessel();
  const CanalGeometry canal = canal7();
  const CoefficientSet k = reference_coefficients();
  MotionSample sample;
  sample.state.y = 0.8;
  sample.state.psi = 0.1;
  sample.state.u = 1.0;
  sample.state.v = -0.1;
  sample.state.r = 0.03;
  sample.vdot = 0.02;
  sample.rdot = -0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_measured_forces(sample, k, vessel, canal));
  }
}
BENCHMARK(BM_PredictMeasuredForces);

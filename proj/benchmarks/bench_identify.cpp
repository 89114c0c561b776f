#include <benchmark/benchmark.h>

#include "cbank/dataset.hpp"
#include "cbank/identify.hpp"
#include "cbank/shapley.hpp"
#include "fixtures.hpp"

using namespace cbank;
using cbank::testing::canal7;
using cbank::testing::dtc_vessel;
using cbank::testing::reference_coefficients;

namespace {

CaptiveDataset bench_dataset() {
  auto d = synthesize(dtc_vessel(), canal7(), reference_coefficients(),
                      {ScenarioKind::kHarmonicYaw, 0.2, 20.0}, 0.9, 60.0, 0.05,
                      {0.1, 0.5, 0.5}, 1, 'A');
  append(d, synthesize(dtc_vessel(), canal7(), reference_coefficients(),
                       {ScenarioKind::kHarmonicSway, 1.0, 25.0}, 1.1, 60.0, 0.05,
                       {0.1, 0.5, 0.5}, 2, 'C'));
  return d;
}

}  // namespace

static void BM_BuildMatrices(benchmark::State& state) {
  const CaptiveDataset d = bench_dataset();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_matrices(d));
  }
}
BENCHMARK(BM_BuildMatrices);

static void BM_Solve(benchmark::State& state) {
  const RegressionProblem p = build_matrices(bench_dataset());
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(p));
  }
}
BENCHMARK(BM_Solve);

static void BM_ShapleyBlockY(benchmark::State& state) {
  const CaptiveDataset d = bench_dataset();
  const RegressionProblem p = build_matrices(d);
  const SplitDataset s = split(d, 0.8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shapley_values(Block::kY, p, s,
                                            static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_ShapleyBlockY)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

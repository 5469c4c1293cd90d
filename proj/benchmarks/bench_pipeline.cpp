#include <benchmark/benchmark.h>

#include "optomech/entanglement.hpp"
#include "optomech/formulas.hpp"
#include "optomech/optimize.hpp"

namespace {

using namespace optomech;

constexpr double kKappa = 1e5;

SystemParams operating_point() {
  return SystemParams{kKappa, kKappa, 1.0, 10.0 * kKappa, 9.0 * kKappa};
}

void BM_Scattering(benchmark::State& state) {
  const SystemParams p = operating_point();
  double mu = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scattering(p, mu));
    mu += 1.0;  // defeat caching across iterations
  }
}
BENCHMARK(BM_Scattering);

void BM_Moments(benchmark::State& state) {
  const SystemParams p = operating_point();
  const FilterSpec f{0.0, kKappa, 0.3 / kKappa};
  for (auto _ : state) {
    benchmark::DoNotOptimize(moments(p, f));
  }
}
BENCHMARK(BM_Moments);

void BM_MomentsNarrowFeature(benchmark::State& state) {
  // Equal coupling: the integrand carries a gamma-wide feature at band center.
  SystemParams p = operating_point();
  p.g2 = p.g1;
  const FilterSpec f{0.0, kKappa, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(moments(p, f));
  }
}
BENCHMARK(BM_MomentsNarrowFeature);

void BM_LogNegativity(benchmark::State& state) {
  MomentSet m;
  m.n1 = 1234.5;
  m.n2 = 1234.9;
  m.c12 = {1230.0, 45.0};
  const CovarianceMatrix v = covariance_from_moments(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_negativity(v));
  }
}
BENCHMARK(BM_LogNegativity);

void BM_TauOptNumeric(benchmark::State& state) {
  const SystemParams p = operating_point();
  const FilterSpec band{0.0, kKappa, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tau_opt_numeric(p, band));
  }
}
BENCHMARK(BM_TauOptNumeric);

void BM_PipelinePoint(benchmark::State& state) {
  const SystemParams p = operating_point();
  const FilterSpec f{0.0, kKappa, -0.2 / kKappa};
  for (auto _ : state) {
    benchmark::DoNotOptimize(output_entanglement(p, f));
  }
}
BENCHMARK(BM_PipelinePoint);

}  // namespace

BENCHMARK_MAIN();

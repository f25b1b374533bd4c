#include <benchmark/benchmark.h>

#include "quasient/freefermion.hpp"
#include "quasient/model.hpp"

using namespace quasient;

static void BM_Diagonalize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto form = model::build_xy_majorana(model::make_xy(0.5, 0.9, n));
  for (auto _ : state) {
    auto basis = freefermion::diagonalize(form);
    benchmark::DoNotOptimize(basis.epsilon);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Diagonalize)->RangeMultiplier(2)->Range(64, 512)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_SpectrumFromGamma(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto basis = freefermion::diagonalize(model::build_xy_majorana(model::make_xy(0.5, 0.9, n)));
  const auto corr = freefermion::correlation_excited(basis, {{n / 2}}, n / 2);
  for (auto _ : state) {
    auto spec = freefermion::spectrum_from_gamma(corr);
    benchmark::DoNotOptimize(spec.entropy);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SpectrumFromGamma)->RangeMultiplier(2)->Range(64, 512)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_SingleModeScanPoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto basis = freefermion::diagonalize(model::build_xy_majorana(model::make_xy(0.5, 0.9, n)));
  const auto ground = freefermion::correlation_ground(basis, n / 2);
  int k = 0;
  for (auto _ : state) {
    auto corr = ground;
    corr.Gamma -= freefermion::chi(basis, k % n, n / 2);
    auto spec = freefermion::spectrum_from_gamma(corr);
    benchmark::DoNotOptimize(spec.entropy);
    ++k;
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SingleModeScanPoint)->RangeMultiplier(2)->Range(128, 512)->Complexity()->Unit(benchmark::kMillisecond);

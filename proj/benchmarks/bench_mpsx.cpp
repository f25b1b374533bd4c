#include <benchmark/benchmark.h>

#include "quasient/mpsx.hpp"

using namespace quasient;

static void BM_FixedPoints(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  const auto A = mpsx::random_tensor(2, D, 42);
  for (auto _ : state) {
    auto ump = mpsx::fixed_points(A);
    benchmark::DoNotOptimize(ump.l);
  }
}
BENCHMARK(BM_FixedPoints)->RangeMultiplier(2)->Range(2, 16)->Unit(benchmark::kMicrosecond);

static void BM_ExcitationSpectrum(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  const auto ump = mpsx::random_uniform_mps(2, D, 42);
  const auto exc = mpsx::gauge_fix(ump, mpsx::random_tensor(2, D, 43), 0.5);
  for (auto _ : state) {
    auto [spec, entropy] = mpsx::excitation_spectrum(ump, exc);
    benchmark::DoNotOptimize(entropy);
  }
}
BENCHMARK(BM_ExcitationSpectrum)->RangeMultiplier(2)->Range(2, 16)->Unit(benchmark::kMicrosecond);

static void BM_FiniteWindowState(benchmark::State& state) {
  const int W = static_cast<int>(state.range(0));
  const auto ump = mpsx::random_uniform_mps(2, 2, 42);
  const auto exc = mpsx::gauge_fix(ump, mpsx::random_tensor(2, 2, 43), 0.5);
  for (auto _ : state) {
    auto psi = mpsx::finite_window_state(ump, exc, W);
    benchmark::DoNotOptimize(psi);
  }
}
BENCHMARK(BM_FiniteWindowState)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

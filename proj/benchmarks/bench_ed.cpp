#include <benchmark/benchmark.h>

#include "quasient/ed.hpp"
#include "quasient/model.hpp"

using namespace quasient;

static void BM_SpinMatvec(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto H = model::build_spin_matrix(model::make_tilted_ising(1, 1, 1, n));
  Eigen::VectorXd x = Eigen::VectorXd::Random(1 << n), y(1 << n);
  for (auto _ : state) {
    y.noalias() = H.H * x;
    benchmark::DoNotOptimize(y);
  }
  state.SetComplexityN(1 << n);
}
BENCHMARK(BM_SpinMatvec)->DenseRange(10, 14, 2)->Complexity()->Unit(benchmark::kMicrosecond);

static void BM_LowestEigenstates(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto H = model::build_spin_matrix(model::make_tilted_ising(1, 1, 1, n));
  for (auto _ : state) {
    auto states = ed::lowest_eigenstates(H, 8);
    benchmark::DoNotOptimize(states.front().energy);
  }
}
BENCHMARK(BM_LowestEigenstates)->DenseRange(10, 12, 2)->Unit(benchmark::kMillisecond);

static void BM_SchmidtSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto H = model::build_spin_matrix(model::make_tilted_ising(1, 1, 1, n));
  const auto states = ed::lowest_eigenstates(H, 1);
  for (auto _ : state) {
    auto sd = ed::schmidt_spectrum(states.front());
    benchmark::DoNotOptimize(sd.entropy);
  }
}
BENCHMARK(BM_SchmidtSpectrum)->DenseRange(10, 14, 2)->Unit(benchmark::kMillisecond);

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "incommdos/dos.hpp"
#include "incommdos/hamiltonian.hpp"
#include "incommdos/kpm.hpp"

using namespace incomm;

namespace {

constexpr double kA = 2.46;

const TBModel& model() {
  static const TBModel m = builtin_model("tbg", {{"twist_degrees", 6.0}});
  return m;
}

const SpectralWindow& window() {
  static const SpectralWindow w = spectral_bound(model());
  return w;
}

}  // namespace

static void BM_Assemble(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0)) * kA;
  for (auto _ : state) {
    auto h = assemble(model(), r, 1, Vec2(0.3, 0.7), window());
    benchmark::DoNotOptimize(h.matrix().nonZeros());
  }
  state.counters["dofs"] = static_cast<double>(assemble(model(), r, 1, Vec2(0.3, 0.7), window()).dimension());
}
BENCHMARK(BM_Assemble)->Arg(10)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_Matvec(benchmark::State& state) {
  const auto h = assemble(model(), static_cast<double>(state.range(0)) * kA, 1, Vec2(0.3, 0.7), window());
  std::vector<std::complex<double>> v(h.dimension(), {1.0, 0.5});
  for (auto _ : state) {
    auto w = matvec(h, v);
    benchmark::DoNotOptimize(w.data());
  }
  state.SetItemsProcessed(state.iterations() * h.matrix().nonZeros());
}
BENCHMARK(BM_Matvec)->Arg(10)->Arg(30)->Arg(60)->Unit(benchmark::kMicrosecond);

static void BM_Moments(benchmark::State& state) {
  const auto h = assemble(model(), static_cast<double>(state.range(0)) * kA, 1, Vec2(0.3, 0.7), window());
  const int p = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto t = chebyshev_moments(h, 0, p);
    benchmark::DoNotOptimize(t.mu.data());
  }
  state.SetItemsProcessed(state.iterations() * h.matrix().nonZeros() * p);
}
BENCHMARK(BM_Moments)->Args({30, 256})->Args({60, 300})->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& state) {
  const auto h = assemble(model(), 20 * kA, 1, Vec2(0.3, 0.7), window());
  const int p = static_cast<int>(state.range(0));
  const auto t = chebyshev_moments(h, 0, p);
  const auto k = jackson_coefficients(p);
  const auto eps = default_energy_grid(window(), 401);
  for (auto _ : state) {
    auto v = reconstruct_values(t, k, eps);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_Reconstruct)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

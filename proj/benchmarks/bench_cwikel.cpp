#include <benchmark/benchmark.h>

#include "cwikel/covering.hpp"
#include "cwikel/inversion.hpp"
#include "cwikel/orlicz.hpp"
#include "cwikel/profiles.hpp"
#include "cwikel/rank_approx.hpp"
#include "cwikel/spectral.hpp"

using namespace cwikel;

static void BM_LLogLNorm(benchmark::State& state) {
  const auto f = torus_profile("power", 1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(orlicz_norm(decreasing_rearrangement(f)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LLogLNorm)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

static void BM_Covering(benchmark::State& state) {
  const auto f = torus_profile("two-bump", 1, 1024);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_equal_j_covering(f, n).cubes.size());
}
BENCHMARK(BM_Covering)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_CoveringTorus2(benchmark::State& state) {
  const auto f = torus_profile("two-bump", 2, 48);
  for (auto _ : state) benchmark::DoNotOptimize(build_equal_j_covering(f, 16).cubes.size());
}
BENCHMARK(BM_CoveringTorus2)->Unit(benchmark::kMillisecond);

static void BM_BuildKn(benchmark::State& state) {
  const auto f = torus_profile("power", 1, 1024);
  const auto u = torus_profile("lacunary", 1, 1024);
  for (auto _ : state) {
    const auto k = build_Kn(f, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(weighted_error(f, u, k));
  }
}
BENCHMARK(BM_BuildKn)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_CwikelSpectrum(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  const int res = dim == 1 ? 2048 : 64;
  const auto f = torus_profile("log", dim, res);
  for (auto _ : state) benchmark::DoNotOptimize(weak_quasinorm(singular_values(assemble_cwikel(f, N)), 1.0));
}
BENCHMARK(BM_CwikelSpectrum)
    ->Args({64, 1})
    ->Args({256, 1})
    ->Args({8, 2})
    ->Args({14, 2})
    ->Unit(benchmark::kMillisecond);

static void BM_InversionV(benchmark::State& state) {
  const auto f = box_profile("bump", 2, 6.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(inversion_V(f).field.size());
}
BENCHMARK(BM_InversionV)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include "dwalk/position_space.hpp"
#include "dwalk/spectral_scan.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_Eigenphases(benchmark::State& state) {
  const dwalk::WalkSpec w{dwalk::WalkKind::dirac, 0.4, 0.05};
  const auto u = w.at({0.3, -1.1, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(dwalk::eigenphases(u));
}
BENCHMARK(BM_Eigenphases);

void BM_DiracOp(benchmark::State& state) {
  const dwalk::Walk3DParams p{0.4, 0.05};
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dwalk::dirac_op(p, {x, 0.7, -0.2}));
    x += 1e-6;
  }
}
BENCHMARK(BM_DiracOp);

void BM_Scan3D(benchmark::State& state) {
  const dwalk::WalkSpec w{dwalk::WalkKind::dirac, 1.0472, 0.05};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dwalk::scan_3d(w, n).max_abs_energy);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Scan3D)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_Scan1D(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dwalk::scan_1d({0.6, 0.05}, 512).max_abs_energy);
}
BENCHMARK(BM_Scan1D)->Unit(benchmark::kMicrosecond);

void BM_StepPosition3D(benchmark::State& state) {
  const dwalk::WalkSpec w{dwalk::WalkKind::dirac, 0.4, 0.05};
  const auto n = static_cast<std::size_t>(state.range(0));
  auto psi = dwalk::localized_state(w, n, 0, {1.0, 0.0, 0.0, 0.0});
  for (auto _ : state) psi = dwalk::step_position(w, psi);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_StepPosition3D)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_StepMomentum3D(benchmark::State& state) {
  const dwalk::WalkSpec w{dwalk::WalkKind::dirac, 0.4, 0.05};
  const auto n = static_cast<std::size_t>(state.range(0));
  auto psi = dwalk::localized_state(w, n, 0, {1.0, 0.0, 0.0, 0.0});
  for (auto _ : state) psi = dwalk::step_momentum(w, psi);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_StepMomentum3D)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_StepPosition1D(benchmark::State& state) {
  const dwalk::WalkSpec w{dwalk::WalkKind::walk_1d, 0.4, 0.05};
  auto psi = dwalk::branch_wavepacket_1d(w.params_1d(), 4096, 2048.0, 0.3, 0.03, 1);
  for (auto _ : state) psi = dwalk::step_position(w, psi);
}
BENCHMARK(BM_StepPosition1D)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

#include "dwalk/qca.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_FreeStep(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  const auto route = static_cast<dwalk::FreeStepRoute>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(dwalk::build_free_step({0.4, 0.1}, sites, route).nonZeros());
}
BENCHMARK(BM_FreeStep)
    ->Args({4, static_cast<int>(dwalk::FreeStepRoute::minors)})
    ->Args({4, static_cast<int>(dwalk::FreeStepRoute::exponential)})
    ->Args({4, static_cast<int>(dwalk::FreeStepRoute::factorized)})
    ->Args({5, static_cast<int>(dwalk::FreeStepRoute::minors)})
    ->Unit(benchmark::kMillisecond);

void BM_InteractingStep(benchmark::State& state) {
  const dwalk::GaugeLatticeSpace space(static_cast<int>(state.range(0)), 1, dwalk::Boundary::periodic);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dwalk::build_interacting_step({0.4, 0.1}, space, 0.5).nonZeros());
  }
}
BENCHMARK(BM_InteractingStep)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ApplyInteractingStep(benchmark::State& state) {
  const dwalk::GaugeLatticeSpace space(4, 1, dwalk::Boundary::periodic);
  const auto d = dwalk::build_interacting_step({0.4, 0.1}, space, 0.5);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(space.dim()).normalized();
  for (auto _ : state) {
    psi = d * psi;
    benchmark::DoNotOptimize(psi.data());
  }
}
BENCHMARK(BM_ApplyInteractingStep)->Unit(benchmark::kMicrosecond);

}  // namespace

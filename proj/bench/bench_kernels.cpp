#include <benchmark/benchmark.h>

#include <omp.h>

#include "sphera/analysis.hpp"
#include "sphera/kernels.hpp"

using namespace sphera;

namespace {

const SphereSetup& setup() {
  static const auto s = SphereSetup::make(3, 1.0, 0.8);
  return s;
}

std::vector<ComplexExponent> batch(int n) {
  const double p = setup().strip_halfwidth().value();
  std::vector<ComplexExponent> out;
  for (int i = 0; i < n; ++i) out.push_back({-2.0 + 7.0 * i / n, p * ((i * 37) % 101 / 50.0 - 1.0)});
  return out;
}

void BM_F_serial(benchmark::State& state) {
  const auto alphas = batch(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_F_serial(setup(), alphas));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_F_parallel(benchmark::State& state) {
  const auto alphas = batch(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_F_parallel(setup(), alphas));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = kernel_threads();
}

GridSpec grid(int n) {
  const double p = setup().strip_halfwidth().value();
  return {-0.5, 3.5, n, -p, p, n};
}

void BM_signmap_serial(benchmark::State& state) {
  const auto g = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sign_map_I_serial(setup(), g));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_signmap_parallel(benchmark::State& state) {
  const auto g = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sign_map_I(setup(), g));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
  state.counters["threads"] = kernel_threads();
}

}  // namespace

BENCHMARK(BM_F_serial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_F_parallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_signmap_serial)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_signmap_parallel)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

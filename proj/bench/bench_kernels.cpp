// Serial reference kernels against their OpenMP counterparts.

#include "lcs/cgtensor.hpp"
#include "lcs/flowfield.hpp"
#include "lcs/flowmap.hpp"

#include <benchmark/benchmark.h>

namespace {

const lcs::GridShape<2> kGrid{100, 50};

void BM_FlowMapSerial(benchmark::State& state) {
  const auto field = lcs::make_double_gyre();
  for (auto _ : state)
    benchmark::DoNotOptimize(lcs::serial::compute_flow_map<2>(*field, kGrid, 0.0, 10.0, lcs::IntegratorParams{}));
  state.SetItemsProcessed(state.iterations() * int64_t(kGrid[0] * kGrid[1]));
}

void BM_FlowMapOpenMP(benchmark::State& state) {
  const auto field = lcs::make_double_gyre();
  lcs::FlowMapOptions options;
  options.threads = int(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(lcs::compute_flow_map<2>(*field, kGrid, 0.0, 10.0, lcs::IntegratorParams{}, options));
  state.SetItemsProcessed(state.iterations() * int64_t(kGrid[0] * kGrid[1]));
}

const lcs::FlowMapGrid<2>& gyre_flow_map() {
  static const auto fm = [] {
    const auto field = lcs::make_double_gyre();
    return lcs::compute_flow_map<2>(*field, {400, 200}, 0.0, 10.0, lcs::IntegratorParams{});
  }();
  return fm;
}

void BM_CauchyGreenSerial(benchmark::State& state) {
  const auto& fm = gyre_flow_map();
  for (auto _ : state) benchmark::DoNotOptimize(lcs::serial::cauchy_green<2>(fm));
  state.SetItemsProcessed(state.iterations() * int64_t(fm.size()));
}

void BM_CauchyGreenOpenMP(benchmark::State& state) {
  const auto& fm = gyre_flow_map();
  for (auto _ : state)
    benchmark::DoNotOptimize(lcs::cauchy_green<2>(fm, lcs::kDefaultDegeneracy, int(state.range(0))));
  state.SetItemsProcessed(state.iterations() * int64_t(fm.size()));
}

}  // namespace

BENCHMARK(BM_FlowMapSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlowMapOpenMP)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CauchyGreenSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CauchyGreenOpenMP)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "ghost/analytic.hpp"
#include "ghost/duality.hpp"
#include "ghost/oracle.hpp"
#include "ghost/pattern_analysis.hpp"

namespace {

const ghost::SourceParams kSource = ghost::SourceParams::create(1e6, 1e-2);
const ghost::Geometry kGeom = ghost::Geometry::create(1e-4, 1e-5, 702e-9, 0.5, 0.5);

// small enough for the dense two-photon grid
const ghost::SourceParams kDenseSource = ghost::SourceParams::create(2e5, 2e-4);
const ghost::Geometry kDenseGeom = ghost::Geometry::create(7.2e-5, 2.4e-5, 702e-9, 0.008, 0.008);

void BM_GhostPattern(benchmark::State& state) {
  const auto st = ghost::post_slit_state(kSource, kGeom, ghost::conditional_packets(kSource, kGeom));
  const auto z = ghost::uniform_samples(-0.03, 0.03, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ghost::ghost_pattern(st, z));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GhostPattern)->Arg(1001)->Arg(4001)->Arg(16001);

void BM_FringeWidths(benchmark::State& state) {
  const auto st = ghost::post_slit_state(kSource, kGeom, ghost::conditional_packets(kSource, kGeom));
  const auto p = ghost::ghost_pattern(st, ghost::uniform_samples(-0.03, 0.03, 4001));
  for (auto _ : state) benchmark::DoNotOptimize(ghost::fringe_widths(p));
}
BENCHMARK(BM_FringeWidths);

void BM_Propagate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto grid = ghost::discretize_state(kDenseSource, ghost::plan_full_grid(kDenseSource, kDenseGeom, n));
  for (auto _ : state) benchmark::DoNotOptimize(ghost::propagate(grid, ghost::Photon::two, 702e-9, 0.008));
}
BENCHMARK(BM_Propagate)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_OracleFullGrid(benchmark::State& state) {
  ghost::OracleOptions opt;
  opt.strategy = ghost::OracleStrategy::full_grid;
  for (auto _ : state) benchmark::DoNotOptimize(ghost::oracle_coincidence(kDenseSource, kDenseGeom, opt));
}
BENCHMARK(BM_OracleFullGrid)->Unit(benchmark::kMillisecond);

void BM_OracleSlitAdjoint(benchmark::State& state) {
  ghost::OracleOptions opt;
  opt.strategy = ghost::OracleStrategy::slit_adjoint;
  opt.z2_window = 0.03;
  for (auto _ : state) benchmark::DoNotOptimize(ghost::oracle_coincidence(kSource, kGeom, opt));
}
BENCHMARK(BM_OracleSlitAdjoint)->Unit(benchmark::kMillisecond);

void BM_DualitySweep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ghost::duality_sweep(1, n, kSource, kGeom));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DualitySweep)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

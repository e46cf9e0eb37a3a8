#include <benchmark/benchmark.h>

#include "schottky/fixtures.hpp"
#include "schottky/gns.hpp"
#include "schottky/psmeasure.hpp"
#include "schottky/zeta.hpp"

using namespace schottky;

static void BM_WordMaps(benchmark::State& state) {
  const auto spec = reference_spec();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(word_maps(spec, n));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(word_count(2, n)));
}
BENCHMARK(BM_WordMaps)->DenseRange(4, 8, 2);

static void BM_TransferDimension(benchmark::State& state) {
  const auto spec = reference_spec();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_dimension(spec, n));
}
BENCHMARK(BM_TransferDimension)->DenseRange(3, 7, 2)->Unit(benchmark::kMillisecond);

static void BM_LevelRatioDimension(benchmark::State& state) {
  const auto spec = reference_spec();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_dimension(spec, n, {DimensionMethod::level_ratio}));
}
BENCHMARK(BM_LevelRatioDimension)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_Orthonormalize(benchmark::State& state) {
  const auto spec = reference_spec();
  const int n = static_cast<int>(state.range(0));
  const auto cm = cylinder_measure(spec, n, hausdorff_dimension(spec, n));
  const auto isf = build_index_sets(2, n);
  for (auto _ : state) benchmark::DoNotOptimize(orthonormalize(isf, cm));
}
BENCHMARK(BM_Orthonormalize)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

static void BM_CoefficientTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto triple = build_spectral_triple(reference_spec(), n);
  for (auto _ : state) benchmark::DoNotOptimize(coefficient_table(triple, TableScope::recovery));
}
BENCHMARK(BM_CoefficientTable)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_Recover(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto table = coefficient_table(build_spectral_triple(reference_spec(), n), TableScope::recovery);
  for (auto _ : state) benchmark::DoNotOptimize(recover_measures(table, 2, n));
}
BENCHMARK(BM_Recover)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

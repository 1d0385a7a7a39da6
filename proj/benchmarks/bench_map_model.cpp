#include <benchmark/benchmark.h>

#include <filesystem>

#include "firesquad/grid_map.hpp"

using namespace firesquad;

namespace {

const GridMap &map_named(int which) {
  static const GridMap maps[] = {
      load_map_file(std::filesystem::path(FIRESQUAD_DATA_DIR) / "office.yaml"),
      load_map_file(std::filesystem::path(FIRESQUAD_DATA_DIR) / "loop.yaml"),
  };
  return maps[which];
}

void BM_DistanceTransform(benchmark::State &state) {
  const GridMap &m = map_named(static_cast<int>(state.range(0)));
  const auto metric = state.range(1) == 0 ? DistanceMetric::euclidean : DistanceMetric::chamfer34;
  for (auto _ : state) benchmark::DoNotOptimize(distance_transform(m, metric));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.cell_count()));
}
BENCHMARK(BM_DistanceTransform)->ArgNames({"map", "chamfer"})->ArgsProduct({{0, 1}, {0, 1}});

void BM_LineOfSight(benchmark::State &state) {
  const GridMap &m = map_named(0);
  const Vec2 a{0.5, 1.0}, b{11.5, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(line_of_sight(m, a, b));
}
BENCHMARK(BM_LineOfSight);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "firesquad/graph_build.hpp"
#include "firesquad/planner.hpp"
#include "firesquad/simulation.hpp"

using namespace firesquad;

namespace {

const std::filesystem::path kData = FIRESQUAD_DATA_DIR;
const char *const kMaps[] = {"corridor", "office", "apartment", "loop"};

void BM_BuildSubGraphs(benchmark::State &state) {
  const std::string name = kMaps[state.range(0)];
  const GridMap map = load_map_file(kData / (name + ".yaml"));
  const RoomAnnotation ann = load_room_annotation_file(kData / (name + "_rooms.yaml"));
  const DistanceField field = distance_transform(map);
  for (auto _ : state) {
    RoomGraph rooms = load_rooms(ann, map);
    build_all_sub_graphs(rooms, map, field, GraphParams{});
    benchmark::DoNotOptimize(rooms);
  }
  state.SetLabel(name);
}
BENCHMARK(BM_BuildSubGraphs)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

const Environment &loop_env() {
  static const Environment env = make_environment(load_map_file(kData / "loop.yaml"),
                                                  load_room_annotation_file(kData / "loop_rooms.yaml"), GraphParams{});
  return env;
}

// A* between random node pairs of the largest room sub-graph.
void BM_PlanRoom(benchmark::State &state) {
  const Environment &env = loop_env();
  const RoomSubGraph *g = nullptr;
  for (std::size_t k = 0; k < env.rooms.rooms().size(); ++k)
    if (!g || env.rooms.sub_graph(k)->size() > g->size()) g = env.rooms.sub_graph(k);
  const auto tactic = static_cast<Tactic>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g->size() - 1));
  for (auto _ : state) benchmark::DoNotOptimize(plan_room(*g, pick(rng), pick(rng), tactic));
  state.SetLabel(std::string(to_string(tactic)) + ", " + std::to_string(g->size()) + " nodes");
}
BENCHMARK(BM_PlanRoom)->DenseRange(0, 2);

void BM_PlanMission(benchmark::State &state) {
  const Environment &env = loop_env();
  const Scenario s = load_scenario_file(kData / "scenarios" / "loop.yaml");
  const MissionRequest req = mission_request(s.squads[0], s.fallback_to_free);
  for (auto _ : state) benchmark::DoNotOptimize(plan_mission(env.rooms, env.map, env.field, req, s.graph));
}
BENCHMARK(BM_PlanMission)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

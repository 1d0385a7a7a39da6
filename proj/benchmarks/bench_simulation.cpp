#include <benchmark/benchmark.h>

#include <filesystem>

#include "firesquad/simulation.hpp"

using namespace firesquad;

namespace {

const std::filesystem::path kData = FIRESQUAD_DATA_DIR;

// Whole-run simulation time of a bundled scenario under each tactic; planning
// happens once outside the timed loop.
void BM_Simulate(benchmark::State &state, const char *name) {
  Scenario s = load_scenario_file(kData / "scenarios" / (std::string(name) + ".yaml"));
  s.override_tactic(static_cast<Tactic>(state.range(0)));
  const Environment env = load_environment(s, s.seed);
  const PlanSet plans = plan_squads(s, env);
  if (!plans.feasible) {
    state.SkipWithError(plans.reason.c_str());
    return;
  }
  const World world = spawn_world(s, plans.plans, env);
  const RunOptions options = run_options(s, plans.plans);
  std::size_t steps = 0;
  for (auto _ : state) {
    const Trajectory t = run(world, env.map, s.sim, options);
    steps += t.steps;
  }
  state.counters["steps"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kAvgIterations);
  state.SetLabel(std::string(to_string(static_cast<Tactic>(state.range(0)))) + ", plan " +
                 std::to_string(plans.plans[0].length()) + " m");
}
BENCHMARK_CAPTURE(BM_Simulate, corridor, "corridor")->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, office, "office")->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, loop, "loop")->DenseRange(0, 2)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_Step(benchmark::State &state) {
  const Scenario s = load_scenario_file(kData / "scenarios" / "corridor.yaml");
  const Environment env = load_environment(s, s.seed);
  const PlanSet plans = plan_squads(s, env);
  World world = spawn_world(s, plans.plans, env);
  Simulator sim(env.map, s.sim);
  sim.update_trackers(world);
  const World start = world;
  int k = 0;
  for (auto _ : state) {
    sim.step(world, s.dt);
    if (++k == 50) {
      state.PauseTiming();
      world = start;
      k = 0;
      state.ResumeTiming();
    }
  }
}
BENCHMARK(BM_Step);

}  // namespace

BENCHMARK_MAIN();

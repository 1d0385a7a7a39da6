#include "firesquad/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <optional>
#include <string>

#include "firesquad/errors.hpp"
#include "firesquad/report.hpp"
#include "firesquad/scenario.hpp"
#include "firesquad/simulation.hpp"

namespace firesquad {

namespace {

struct RunConfig {
  std::string map;
  std::string rooms;
  std::string scenario;
  std::string tactic;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::string out = ".";
  bool dump_graph = false;
  int reps = 1;
};

Scenario scenario_from(const RunConfig &cfg) {
  Scenario s = load_scenario_file(cfg.scenario);
  if (!cfg.map.empty()) s.map_path = cfg.map;
  if (!cfg.rooms.empty()) s.rooms_path = cfg.rooms;
  if (!cfg.tactic.empty()) {
    const auto t = parse_tactic(cfg.tactic);
    if (!t) throw InputError("unknown tactic '" + cfg.tactic + "' (expected FREE, WALL_LHR or WALL_RHR)");
    s.override_tactic(*t);
  }
  if (cfg.seed) s.seed = *cfg.seed;
  if (cfg.dt) {
    if (!(*cfg.dt > 0.0)) throw InputError("--dt must be positive");
    s.dt = *cfg.dt;
  }
  return s;
}

int cmd_rooms(const RunConfig &cfg, std::ostream &out) {
  const GridMap map = load_map_file(cfg.map);
  const RoomGraph rooms = load_rooms(load_room_annotation_file(cfg.rooms), map);
  out << fmt::format("map {}x{} cells at {} m, {} occupied\n", map.width(), map.height(), map.resolution(),
                     map.occupied_count());
  for (const Room &r : rooms.rooms()) {
    out << fmt::format("room {}: {} free cells, {} doorway(s)\n", r.id, r.cells.size(), r.doorways.size());
  }
  for (const Doorway &d : rooms.doorways()) {
    out << fmt::format("doorway {}: {} <-> {}\n", d.id, d.room_a, d.to_exterior() ? std::string(kExterior) : d.room_b);
  }
  out << "rooms valid\n";
  return kExitOk;
}

int cmd_plan(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  const Scenario s = scenario_from(cfg);
  const Environment env = load_environment(s, s.seed);
  const std::filesystem::path dir = cfg.out;
  if (cfg.dump_graph) write_file(dir / "graph.json", graph_json(env.rooms));
  const PlanSet plans = plan_squads(s, env);
  if (!plans.feasible) {
    err << "infeasible: " << plans.reason << "\n";
    return kExitInfeasible;
  }
  write_file(dir / "plan.json", plan_json(plans.plans));
  for (const SquadPlan &p : plans.plans) {
    out << fmt::format("squad {}: {} segment(s), {:.3f} m\n", p.squad_id, p.segments.size(), p.length());
    for (const std::string &w : p.warnings) err << "warning: " << w << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  const Scenario s = scenario_from(cfg);
  const Environment env = load_environment(s, s.seed);
  const PlanSet plans = plan_squads(s, env);
  if (!plans.feasible) {
    err << "infeasible: " << plans.reason << "\n";
    return kExitInfeasible;
  }
  const std::filesystem::path dir = cfg.out;
  write_file(dir / "plan.json", plan_json(plans.plans));
  if (cfg.dump_graph) write_file(dir / "graph.json", graph_json(env.rooms));
  try {
    const Trajectory t = run(spawn_world(s, plans.plans, env), env.map, s.sim, run_options(s, plans.plans));
    write_file(dir / "trajectory.csv", trajectory_csv(t));
    write_file(dir / "summary.json", summary_json(t));
    out << fmt::format("status {} at t={:.2f} s, mean path length {:.3f} m, simulation time {:.1f} ms\n",
                       to_string(t.status), t.t_end, t.mean_path_length(), t.wall_clock_s * 1000.0);
    if (t.penetration_events > 0) err << "warning: " << t.penetration_events << " penetration event(s)\n";
  } catch (const SimulationAborted &e) {
    err << "simulation aborted: " << e.what() << "\n" << e.snapshot() << "\n";
    return kExitSimulationAbort;
  }
  return kExitOk;
}

int cmd_bench(const RunConfig &cfg, std::ostream &out) {
  const Scenario s = scenario_from(cfg);
  std::vector<Tactic> tactics{Tactic::free, Tactic::wall_lhr, Tactic::wall_rhr};
  if (!cfg.tactic.empty()) tactics = {*parse_tactic(cfg.tactic)};
  const BenchReport report = bench(s, cfg.reps, tactics);
  const std::filesystem::path dir = cfg.out;
  write_file(dir / "bench.json", bench_json(report, std::filesystem::path(cfg.scenario).filename().string()));
  for (const TacticBench &t : report.tactics) {
    out << fmt::format("{}: {}/{} feasible, mu_d {:.3f} m, s2_d {:.4f}, mu_t {:.2f} ms, s2_t {:.4f}\n",
                       to_string(t.tactic), t.feasible, t.repetitions, t.mean_d, t.var_d, t.mean_t, t.var_t);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Tactic-aware squad path planning and force-model simulation", "firesquad"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--map", cfg.map, "Map metadata file (overrides the scenario)");
    sub->add_option("--rooms", cfg.rooms, "Room annotation file (overrides the scenario)");
    sub->add_option("--scenario", cfg.scenario, "Scenario file")->required();
    sub->add_option("--tactic", cfg.tactic, "Tactic for every room: FREE, WALL_LHR or WALL_RHR");
    sub->add_option("--seed", cfg.seed, "Offset of the sampling sequences");
    sub->add_option("--out", cfg.out, "Output directory");
  };

  CLI::App *plan = app.add_subcommand("plan", "Plan every squad and write plan.json");
  add_common(plan);
  plan->add_flag("--dump-graph", cfg.dump_graph, "Also write graph.json");

  CLI::App *simulate = app.add_subcommand("simulate", "Plan and simulate, writing trajectory.csv");
  add_common(simulate);
  simulate->add_option("--dt", cfg.dt, "Integrator step in seconds");
  simulate->add_flag("--dump-graph", cfg.dump_graph, "Also write graph.json");

  CLI::App *bench_cmd = app.add_subcommand("bench", "Repeat simulations and write bench.json");
  add_common(bench_cmd);
  bench_cmd->add_option("--dt", cfg.dt, "Integrator step in seconds");
  bench_cmd->add_option("--reps", cfg.reps, "Repetitions per tactic")->check(CLI::PositiveNumber);

  CLI::App *rooms = app.add_subcommand("rooms", "Validate a map and its room annotation");
  rooms->add_option("--map", cfg.map, "Map metadata file")->required();
  rooms->add_option("--rooms", cfg.rooms, "Room annotation file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*rooms) return cmd_rooms(cfg, out);
    if (!cfg.tactic.empty() && !parse_tactic(cfg.tactic)) {
      err << "error: unknown tactic '" << cfg.tactic << "' (expected FREE, WALL_LHR or WALL_RHR)\n";
      return kExitInputError;
    }
    if (*plan) return cmd_plan(cfg, out, err);
    if (*simulate) return cmd_simulate(cfg, out, err);
    return cmd_bench(cfg, out);
  } catch (const SimulationAborted &e) {
    err << "simulation aborted: " << e.what() << "\n" << e.snapshot() << "\n";
    return kExitSimulationAbort;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace firesquad

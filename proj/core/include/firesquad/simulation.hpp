#pragma once

// Mission orchestration: environment loading, planning every squad, spawning
// agents and stepping the coupled force model with a fixed-step Dormand-Prince
// integrator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "firesquad/grid_map.hpp"
#include "firesquad/hsfm.hpp"
#include "firesquad/integrator.hpp"
#include "firesquad/planner.hpp"
#include "firesquad/room_graph.hpp"
#include "firesquad/scenario.hpp"
#include "firesquad/waypoints.hpp"

namespace firesquad {

struct Environment {
  GridMap map;
  DistanceField field;
  RoomGraph rooms;  // every sub-graph published
};

// Loads map and rooms and builds all room sub-graphs; `seed` shifts the
// sampling sequences.
Environment load_environment(const Scenario &scenario, std::uint64_t seed);
Environment make_environment(GridMap map, const RoomAnnotation &annotation, const GraphParams &params);

struct PlanSet {
  bool feasible = true;
  std::vector<SquadPlan> plans;
  std::string reason;  // first failure
  int failed_squad = 0;
};

PlanSet plan_squads(const Scenario &scenario, const Environment &env);

struct SquadState {
  int id = 0;
  std::optional<Vision> vision_override;
  std::vector<AgentState> agents;
  std::vector<WaypointTracker> trackers;
  std::vector<Vision> vision;                // per agent, refreshed between steps
  std::vector<std::optional<Vec2>> targets;  // per agent, refreshed between steps; empty brakes
  std::map<std::string, Tactic> room_tactics;
};

struct World {
  double t = 0.0;
  std::vector<SquadState> squads;

  std::size_t agent_count() const;
  bool done() const;  // every tracker exhausted
};

// Waypoints as the agents track them: in wall-search rooms each waypoint
// between the start and the goal moves towards the wall on the tactic's hand side of its travel
// direction, keeping hand_offset from it, when such a wall is within hand_range.
std::vector<Waypoint> hand_side_waypoints(const std::vector<Waypoint> &waypoints,
                                          const std::map<std::string, Tactic> &room_tactics, const GridMap &map,
                                          const SimParams &params);

// Places each squad at its start (explicit poses, or a column facing the first
// waypoint) with the squad's plan loaded into every agent's tracker.
World spawn_world(const Scenario &scenario, const std::vector<SquadPlan> &plans, const Environment &env);

// One agent's force breakdown in the current world.
ForceBreakdown agent_forces(const World &world, std::size_t squad, std::size_t agent, const GridMap &map,
                            const SimParams &params);

class Simulator {
 public:
  Simulator(const GridMap &map, SimParams params);

  // Advances every agent by one Dormand-Prince step, then updates waypoint
  // trackers and vision. Throws SimulationAborted on a non-finite state.
  void step(World &world, double dt);
  // Refreshes vision per agent and drops waypoints already visited.
  // Returns true when any target or vision changed.
  bool update_trackers(World &world) const;

  const SimParams &params() const { return params_; }

 private:
  const GridMap &map_;
  SimParams params_;
  Dopri5Stepper stepper_;
  mutable GeodesicGuide guide_;
};

struct TrajectoryRow {
  double t = 0.0;
  int squad_id = 0;
  int agent_id = 0;
  AgentState state;
};

struct AgentSummary {
  int squad_id = 0;
  int agent_id = 0;
  double path_length = 0.0;  // sum of |dp| over integrator steps
  std::size_t waypoints_left = 0;
  std::optional<Vec2> next_waypoint;
};

enum class RunStatus { completed, timeout };

const char *to_string(RunStatus s);

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  std::vector<AgentSummary> agents;
  RunStatus status = RunStatus::completed;
  double t_end = 0.0;
  std::size_t steps = 0;
  std::size_t penetration_events = 0;  // report rows with an agent center inside an occupied cell
  double wall_clock_s = 0.0;           // integration loop only

  double mean_path_length() const;
};

struct RunOptions {
  double dt = 0.06;
  double dt_report = 0.06;  // rounded to a whole number of steps
  double t_max = 60.0;
};

Trajectory run(World world, const GridMap &map, const SimParams &params, const RunOptions &options);

// Options from the scenario; the default t_max is ten times the slowest squad's
// plan length over its desired speed.
RunOptions run_options(const Scenario &scenario, const std::vector<SquadPlan> &plans);

struct TacticBench {
  Tactic tactic = Tactic::free;
  int repetitions = 0;
  int feasible = 0;
  int completed = 0;
  int aborted = 0;
  double mean_d = 0.0;  // mean path length, m
  double var_d = 0.0;   // sample variance
  double mean_t = 0.0;  // mean simulation wall-clock time, ms
  double var_t = 0.0;
  std::string note;
};

struct BenchReport {
  std::vector<TacticBench> tactics;
};

// Repetition k plans with seed + k. Path length is the mean over agents.
BenchReport bench(const Scenario &scenario, int repetitions, const std::vector<Tactic> &tactics);

}  // namespace firesquad

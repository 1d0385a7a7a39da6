#pragma once

// Mission scenarios: which map, which squads, which tactics, and the model
// parameters the simulation runs with.
//
//   map: office.yaml              # map metadata, relative to this file
//   rooms: office_rooms.yaml      # room annotation, relative to this file
//   dt: 0.06                      # integrator step, s
//   dt_report: 0.06               # trajectory sampling, a multiple of dt
//   t_max: 120                    # optional; default 10 x plan length / v_des
//   seed: 0                       # offsets the sampling sequences
//   fallback_to_free: false
//   graph: {wall_band: 1.0}       # optional GraphParams overrides
//   model: {k_coh: 4.5}           # optional SimParams overrides
//   squads:
//     - id: 1
//       agents: 3
//       start: {room: hall, point: [1.0, 1.0]}
//       goal: {room: hall, point: [9.0, 1.0]}
//       tactic: WALL_RHR          # default for every room
//       room_tactics: {office: FREE}
//       search: [office]          # single-doorway rooms searched on the way
//       vision: auto              # auto | free | restricted
//       poses: [[1.0, 1.0, 0.0]]  # optional explicit [x, y, theta] per agent

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "firesquad/graph_build.hpp"
#include "firesquad/hsfm.hpp"
#include "firesquad/planner.hpp"
#include "firesquad/waypoints.hpp"

namespace firesquad {

struct SimParams {
  ControlParams control;
  double v_des_free = 1.5;
  double v_des_restricted = 0.326;
  ContactParams contact;
  SocialParams social;
  double d_coh_free = 0.634;
  double d_coh_restricted = 0.275;
  // Cohesion accelerations, kept below v_des / tau so the pull never beats an
  // agent's own goal force.
  double k_coh_free = 1.5;
  double k_coh_restricted = 0.52;
  // Wall search: intermediate waypoints move sideways towards a wall on the
  // tactic's hand side within hand_range, stopping hand_offset short of it.
  double hand_offset = 0.4;  // m, waypoint to wall
  double hand_range = 1.0;   // m
  WaypointParams waypoints;
  double mass = 80.0;
  double radius = 0.25;
  double spawn_spacing = 0.6;  // m between agents placed around a start point

  double v_des(Vision v) const { return v == Vision::free ? v_des_free : v_des_restricted; }
  double d_coh(Vision v) const { return v == Vision::free ? d_coh_free : d_coh_restricted; }
  double k_coh(Vision v) const { return v == Vision::free ? k_coh_free : k_coh_restricted; }
};

enum class VisionMode { automatic, free, restricted };

struct Pose {
  Vec2 p{};
  double theta = 0.0;
};

struct SquadSpec {
  int id = 0;
  int agents = 3;
  RoomPoint start;
  RoomPoint goal;
  Tactic tactic = Tactic::free;
  std::map<std::string, Tactic> room_tactics;
  std::vector<std::string> search;
  VisionMode vision = VisionMode::automatic;
  std::vector<Pose> poses;
};

struct Scenario {
  std::filesystem::path map_path;
  std::filesystem::path rooms_path;
  double dt = 0.06;
  std::optional<double> dt_report;
  std::optional<double> t_max;
  std::uint64_t seed = 0;
  bool fallback_to_free = false;
  GraphParams graph;
  SimParams sim;
  std::vector<SquadSpec> squads;

  // Every squad uses `tactic` in every room.
  void override_tactic(Tactic tactic);
};

// Relative map and room paths are resolved against base_dir.
Scenario parse_scenario(const std::string &yaml_text, const std::filesystem::path &base_dir);
Scenario load_scenario_file(const std::filesystem::path &path);

MissionRequest mission_request(const SquadSpec &squad, bool fallback_to_free);

}  // namespace firesquad

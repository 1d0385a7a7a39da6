#pragma once

// Per-agent waypoint consumption: a vision cone in the gazing direction and a
// slim circle around the agent. Essential waypoints only yield to a circle.

#include <cstddef>
#include <deque>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "firesquad/grid_map.hpp"
#include "firesquad/hsfm.hpp"
#include "firesquad/planner.hpp"

namespace firesquad {

enum class Vision { free, restricted };

const char *to_string(Vision v);

struct WaypointParams {
  double cone_range_free = 50.0;         // m
  double cone_range_restricted = 2.0;    // m
  double cone_angle = std::numbers::pi;  // full opening angle, rad
  double circle_range = 0.2;             // m
  double essential_circle_range = 0.5;   // m
  // Cone hits also need an unobstructed line of sight.
  bool cone_needs_line_of_sight = true;
};

struct WaypointTracker {
  std::deque<Waypoint> remaining;
  std::optional<Waypoint> last_removed;
  WaypointParams params;

  bool done() const { return remaining.empty(); }
  std::optional<Waypoint> front() const;
};

// True when the waypoint counts as visited from the agent's pose. `map` may be
// null to skip the line-of-sight requirement.
bool waypoint_visited(const Waypoint &w, const AgentState &a, Vision vision, const WaypointParams &params,
                      const GridMap *map);

// Line of sight along the center line and both edges of a strip.
bool clear_strip(const GridMap &map, Vec2 a, Vec2 b, double half_width);

// Grid path lengths (8-connected, no corner cutting) towards goal cells, cached
// per goal. Steps into cells closer than `clearance` to an obstacle cost
// `tight_cost` times more, so guided agents keep off walls where they can.
// Steers agents that have lost sight of their waypoints.
class GeodesicGuide {
 public:
  explicit GeodesicGuide(const GridMap &map, double clearance = 0.35, double tight_cost = 10.0);

  // Free cell center within `radius` of p with the smallest path length to the
  // goal's cell, reachable along a straight strip of the given half width.
  // Empty when the goal is unreachable.
  std::optional<Vec2> via(Vec2 p, Vec2 goal, double radius, double half_width = 0.0);

 private:
  const std::vector<double> &field(std::size_t goal);

  const GridMap *map_;
  std::vector<double> step_weight_;  // per cell
  std::map<std::size_t, std::vector<double>> fields_;
};

// Point the agent heads for: the front waypoint while in line of sight (with a
// guide, along a strip most of the body wide), else with a guide the nearby
// cell closest to the front along the grid, else the last removed waypoint.
// Empty once the tracker is exhausted.
std::optional<Vec2> steering_target(const WaypointTracker &tracker, const AgentState &a, const GridMap *map,
                                    GeodesicGuide *guide = nullptr);

// Pops visited waypoints off the front, stopping at the first one still ahead.
// Returns how many were removed.
std::size_t update_waypoints(WaypointTracker &tracker, const AgentState &a, Vision vision, const GridMap *map);

}  // namespace firesquad

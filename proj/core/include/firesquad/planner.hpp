#pragma once

// Tactic-constrained path planning inside rooms and across the building.

#include <map>
#include <string>
#include <vector>

#include "firesquad/graph_build.hpp"
#include "firesquad/grid_map.hpp"
#include "firesquad/plan_graph.hpp"
#include "firesquad/room_graph.hpp"

namespace firesquad {

struct PathResult {
  bool feasible = false;
  std::vector<NodeId> nodes;
  double cost = 0.0;
  std::string reason;  // set when infeasible
};

double path_length(const RoomSubGraph &graph, const std::vector<NodeId> &nodes);

// A* over edges whose permits contain the tactic. Euclidean heuristic; equal
// priorities expand the smaller node id first.
PathResult plan_room(const RoomSubGraph &graph, NodeId entry, NodeId exit, Tactic tactic);

// Shortest permitted path from `from` to every node (cost +inf when unreachable).
std::vector<double> shortest_costs(const RoomSubGraph &graph, NodeId from, Tactic tactic);

// Free traversal of a room with a single doorway: a greedy tree walk over the
// visibility nodes. From the current node go to the closest unvisited visibility
// node in line of sight; at a leaf, branch again from the previously visited
// stop closest to an unvisited visibility node it can see. Stops are joined by
// shortest FREE paths and the walk returns to the entry.
PathResult plan_room_single_entry_free(const RoomSubGraph &graph, NodeId entry, const GridMap &map);

// Wall search of a room with a single doorway: the first step goes to the
// nearest wall-band neighbour of the entry in the tactic's sense of rotation.
// With the entry and the neighbours behind it blocked, the walk continues to the
// reachable node with the longest shortest path, then A* under the tactic leads
// back to the entry.
PathResult plan_room_single_entry_wall(const RoomSubGraph &graph, NodeId entry, Tactic tactic);

struct RoomPoint {
  std::string room;
  Vec2 point{};
};

struct Waypoint {
  Vec2 position{};
  bool essential = false;
  std::string room;
};

struct MissionRequest {
  int squad_id = 0;
  RoomPoint start;
  RoomPoint goal;
  Tactic default_tactic = Tactic::free;
  std::map<std::string, Tactic> room_tactics;
  // Single-doorway rooms searched on the way, entered from the route room they open onto.
  std::vector<std::string> search_rooms;
  // Plan an infeasible wall search as free traversal instead of failing.
  bool fallback_to_free = false;

  Tactic tactic_for(const std::string &room) const;
};

enum class SegmentKind { pass, search };

struct RoomSegment {
  std::string room;
  SegmentKind kind = SegmentKind::pass;
  Tactic requested = Tactic::free;
  Tactic used = Tactic::free;
  bool fell_back = false;
  std::vector<Vec2> node_positions;
  std::vector<Waypoint> waypoints;
  double length = 0.0;
};

struct SquadPlan {
  int squad_id = 0;
  std::vector<RoomSegment> segments;
  std::vector<std::string> warnings;

  // Stitched waypoint list; coincident segment joints are merged.
  std::vector<Waypoint> waypoints() const;
  double length() const;
  // Tactic actually used in a room (FREE when the room is not visited).
  Tactic tactic_in(const std::string &room) const;
};

struct MissionResult {
  bool feasible = false;
  SquadPlan plan;
  std::string reason;
  std::string failed_room;
};

// Room sequence plus per-room plans stitched at doorway nodes. Every room's
// sub-graph must be published in `rooms`.
MissionResult plan_mission(const RoomGraph &rooms, const GridMap &map, const DistanceField &field,
                           const MissionRequest &request, const GraphParams &params);

// Re-plans only the segments inside `room` (e.g. after its tactic changed);
// all other segments are copied unchanged from `previous`.
MissionResult replan_room(const SquadPlan &previous, const RoomGraph &rooms, const GridMap &map,
                          const DistanceField &field, const MissionRequest &request, const GraphParams &params,
                          const std::string &room);

}  // namespace firesquad

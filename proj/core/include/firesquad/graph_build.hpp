#pragma once

// Per-room planning graph: medial axis + visibility roadmap + Hammersley fill,
// connected by proximity and labelled with the tactics each directed edge admits.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "firesquad/grid_map.hpp"
#include "firesquad/plan_graph.hpp"
#include "firesquad/room_graph.hpp"

namespace firesquad {

struct GraphParams {
  double connection_radius = 1.5;  // m
  double wall_band = 1.0;          // m, wall-search edges need both ends this close to a wall
  double fill_density = 4.0;       // candidate nodes per m^2
  double fill_spacing = 0.3;       // m, minimum distance from a fill node to any other node
  double sample_clearance = 0.3;   // m, minimum wall distance for roadmap and fill samples
  int roadmap_budget = 50;         // consecutive rejected samples before the roadmap stops
  int roadmap_sample_cap = 20000;  // hard limit on drawn samples
  bool complete_coverage = true;   // add guards for cells the sampled roadmap leaves unseen
  std::uint64_t seed_offset = 0;   // shifts sequence start indices
};

struct MedialAxis {
  std::vector<Cell> cells;
  // Pairs of indices into `cells` that are 8-adjacent.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

// Skeleton of the room's free space: cells where the nearest obstacle cells
// of neighbouring cells lie far apart (Voronoi borders between obstacle seeds),
// thinned to one cell width and filtered to local distance maxima.
MedialAxis build_medial_axis(const Room &room, const GridMap &map, const DistanceField &field);

struct VisibilityRoadmap {
  std::vector<PlanNode> nodes;  // guards and connectors, kind set accordingly
  std::size_t samples_drawn = 0;
  std::size_t completion_guards = 0;
};

// Visibility roadmap from Halton samples over the room's bounding box. A sample
// seeing no guard becomes a guard; one seeing guards of two or more separate
// components becomes a connector; anything else is rejected. Sampling stops after
// `budget` consecutive rejections. With complete_coverage, every room cell left
// unseen gets a guard placed at the clearest cell that sees it.
VisibilityRoadmap build_visibility_roadmap(const Room &room, const GridMap &map, const DistanceField &field,
                                           int budget, std::uint64_t seed_offset, double clearance = 0.3,
                                           int sample_cap = 20000, bool complete_coverage = true);

// Hammersley candidates (n = ceil(density * area)) over the room's bounding box,
// kept when free, inside the room, clear of walls and `spacing` away from every
// existing or accepted node.
std::vector<PlanNode> fill_random(const Room &room, const GridMap &map, const DistanceField &field, double density,
                                  std::uint64_t seed_offset, double spacing = 0.3, double clearance = 0.3,
                                  std::span<const PlanNode> existing = {});

// Wall-search permits of the pair u->v and v->u. Both endpoints must lie within
// the band; the sign of n x (v - u), with n the summed obstacle directions of
// both endpoints, picks RHR (> 0, wall on the right) or LHR (< 0). |cross| below
// 1e-9 admits both.
std::pair<Permits, Permits> label_pair(const PlanNode &u, const PlanNode &v, double wall_band);

// Connects every pair of nodes within `radius` that see each other. Node ids
// are reassigned to positions in the returned graph.
RoomSubGraph connect_and_label(std::vector<PlanNode> nodes, const GridMap &map, const DistanceField &field,
                               double radius, double wall_band, const Room &room);

// Builds a node at `position` with distance-field data filled in.
PlanNode make_node(Vec2 position, NodeKind kind, const DistanceField &field, const GridMap &map);

// Adds a node to an existing sub-graph, wiring it like connect_and_label would.
NodeId attach_node(RoomSubGraph &graph, Vec2 position, NodeKind kind, const GridMap &map,
                   const DistanceField &field, double radius);

// Full pipeline for one room: doorway nodes, roadmap, medial axis, fill, edges.
RoomSubGraph build_room_sub_graph(const RoomGraph &rooms, std::size_t room, const GridMap &map,
                                  const DistanceField &field, const GraphParams &params);

// Builds and publishes every room's sub-graph (rooms are independent).
void build_all_sub_graphs(RoomGraph &rooms, const GridMap &map, const DistanceField &field,
                          const GraphParams &params);

}  // namespace firesquad

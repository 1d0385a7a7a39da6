#include "firesquad/graph_build.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "firesquad/sampling.hpp"

namespace firesquad {

PlanNode make_node(Vec2 position, NodeKind kind, const DistanceField &field, const GridMap &map) {
  PlanNode n;
  n.position = position;
  n.kind = kind;
  n.wall_distance = field.at(position);
  if (const auto c = map.cell_at(position)) n.wall_direction = field.obstacle_direction(*c);
  return n;
}

namespace {

bool usable_sample(Vec2 p, const Room &room, const GridMap &map, const DistanceField &field, double clearance) {
  if (map.blocked_at(p) || !room.polygon.contains(p)) return false;
  return field.at(p) >= clearance;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  std::size_t add() {
    parent.push_back(parent.size());
    return parent.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

VisibilityRoadmap build_visibility_roadmap(const Room &room, const GridMap &map, const DistanceField &field,
                                           int budget, std::uint64_t seed_offset, double clearance, int sample_cap,
                                           bool complete_coverage) {
  VisibilityRoadmap out;
  if (room.cells.empty()) return out;
  budget = std::max(budget, 1);
  const Box2 box = room.polygon.bounds();

  std::vector<std::size_t> guard_nodes;  // indices into out.nodes
  std::vector<std::size_t> guard_set;    // disjoint-set element of each guard
  DisjointSets components;

  int failures = 0;
  for (std::uint64_t k = 1; static_cast<int>(out.samples_drawn) < sample_cap && failures < budget; ++k) {
    ++out.samples_drawn;
    const Vec2 u = halton(k + seed_offset);
    const Vec2 p{box.lo.x + u.x * box.width(), box.lo.y + u.y * box.height()};
    if (!usable_sample(p, room, map, field, clearance)) continue;

    std::vector<std::size_t> seen_roots;
    for (std::size_t g = 0; g < guard_nodes.size(); ++g) {
      if (!line_of_sight(map, p, out.nodes[guard_nodes[g]].position)) continue;
      const std::size_t root = components.find(guard_set[g]);
      if (std::find(seen_roots.begin(), seen_roots.end(), root) == seen_roots.end()) seen_roots.push_back(root);
    }
    if (seen_roots.empty()) {
      guard_nodes.push_back(out.nodes.size());
      guard_set.push_back(components.add());
      out.nodes.push_back(make_node(p, NodeKind::guard, field, map));
      failures = 0;
    } else if (seen_roots.size() >= 2) {
      for (std::size_t r = 1; r < seen_roots.size(); ++r) components.unite(seen_roots[0], seen_roots[r]);
      out.nodes.push_back(make_node(p, NodeKind::connector, field, map));
      failures = 0;
    } else {
      ++failures;
    }
  }

  if (!complete_coverage) return out;

  // Cells no guard sees; cover each with the clearest cell that sees it.
  auto seen_by = [&](const Cell &c, std::size_t guard) {
    return line_of_sight(map, map.cell_center(c), out.nodes[guard].position);
  };
  std::vector<Cell> unseen;
  for (const Cell &c : room.cells) {
    const bool seen = std::any_of(guard_nodes.begin(), guard_nodes.end(), [&](std::size_t g) { return seen_by(c, g); });
    if (!seen) unseen.push_back(c);
  }
  while (!unseen.empty()) {
    const Cell target = unseen.front();
    const Vec2 target_center = map.cell_center(target);
    std::optional<Cell> best;
    for (const Cell &c : room.cells) {
      if (field.at(c) < clearance) continue;
      if (best && field.at(c) <= field.at(*best)) continue;
      if (line_of_sight(map, map.cell_center(c), target_center)) best = c;
    }
    const Cell spot = best.value_or(target);
    guard_nodes.push_back(out.nodes.size());
    out.nodes.push_back(make_node(map.cell_center(spot), NodeKind::guard, field, map));
    ++out.completion_guards;
    const std::size_t g = guard_nodes.back();
    std::erase_if(unseen, [&](const Cell &c) { return seen_by(c, g); });
    // A guard placed on the target cell itself always sees it.
    std::erase_if(unseen, [&](const Cell &c) { return c == spot; });
  }
  return out;
}

std::vector<PlanNode> fill_random(const Room &room, const GridMap &map, const DistanceField &field, double density,
                                  std::uint64_t seed_offset, double spacing, double clearance,
                                  std::span<const PlanNode> existing) {
  std::vector<PlanNode> out;
  if (room.cells.empty() || !(density > 0.0)) return out;
  const Box2 box = room.polygon.bounds();
  const double area = std::abs(room.polygon.signed_area());
  const auto n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(density * area)));
  const double spacing2 = spacing * spacing;
  auto crowded = [&](Vec2 p) {
    auto near = [&](const PlanNode &q) { return squared_norm(q.position - p) < spacing2; };
    return std::any_of(existing.begin(), existing.end(), near) || std::any_of(out.begin(), out.end(), near);
  };
  for (std::uint64_t i = 1; i <= n; ++i) {
    const Vec2 u = hammersley(i + seed_offset, n);
    const Vec2 p{box.lo.x + u.x * box.width(), box.lo.y + u.y * box.height()};
    if (!usable_sample(p, room, map, field, clearance) || crowded(p)) continue;
    out.push_back(make_node(p, NodeKind::fill, field, map));
  }
  return out;
}

std::pair<Permits, Permits> label_pair(const PlanNode &u, const PlanNode &v, double wall_band) {
  Permits forward = Permits::only(Tactic::free);
  Permits backward = Permits::only(Tactic::free);
  if (!(u.wall_distance <= wall_band && v.wall_distance <= wall_band)) return {forward, backward};
  const Vec2 wall = u.wall_direction + v.wall_direction;
  const Vec2 motion = normalized(v.position - u.position);
  const double c = norm(wall) < 1e-9 ? 0.0 : cross(normalized(wall), motion);
  if (std::abs(c) < 1e-9) {
    forward = forward.with(Tactic::wall_lhr).with(Tactic::wall_rhr);
    backward = backward.with(Tactic::wall_lhr).with(Tactic::wall_rhr);
  } else if (c > 0.0) {
    forward = forward.with(Tactic::wall_rhr);
    backward = backward.with(Tactic::wall_lhr);
  } else {
    forward = forward.with(Tactic::wall_lhr);
    backward = backward.with(Tactic::wall_rhr);
  }
  return {forward, backward};
}

RoomSubGraph connect_and_label(std::vector<PlanNode> nodes, const GridMap &map, const DistanceField &field,
                               double radius, double wall_band, const Room &room) {
  (void)field;
  RoomSubGraph g;
  g.room = room.id;
  g.wall_band = wall_band;
  g.nodes = std::move(nodes);
  for (NodeId id = 0; id < g.nodes.size(); ++id) {
    g.nodes[id].id = id;
    if (g.nodes[id].kind == NodeKind::guard || g.nodes[id].kind == NodeKind::connector) {
      g.visibility_nodes.push_back(id);
    }
    if (g.nodes[id].kind == NodeKind::doorway) g.entry_nodes.push_back(id);
  }
  const double r2 = radius * radius;
  for (NodeId a = 0; a < g.nodes.size(); ++a) {
    for (NodeId b = a + 1; b < g.nodes.size(); ++b) {
      const Vec2 pa = g.nodes[a].position, pb = g.nodes[b].position;
      const double d2 = squared_norm(pb - pa);
      if (d2 > r2 || d2 == 0.0) continue;
      if (!line_of_sight(map, pa, pb)) continue;
      const auto [fwd, bwd] = label_pair(g.nodes[a], g.nodes[b], wall_band);
      const double len = edge_length(pa, pb);
      g.edges.push_back({a, b, len, fwd});
      g.edges.push_back({b, a, len, bwd});
    }
  }
  g.rebuild_adjacency();
  return g;
}

NodeId attach_node(RoomSubGraph &graph, Vec2 position, NodeKind kind, const GridMap &map,
                   const DistanceField &field, double radius) {
  PlanNode node = make_node(position, kind, field, map);
  const NodeId id = static_cast<NodeId>(graph.nodes.size());
  node.id = id;
  graph.nodes.push_back(node);
  for (NodeId other = 0; other < id; ++other) {
    const Vec2 q = graph.nodes[other].position;
    const double d = distance(q, position);
    if (d > radius || d == 0.0 || !line_of_sight(map, q, position)) continue;
    const auto [fwd, bwd] = label_pair(graph.nodes[other], graph.nodes[id], graph.wall_band);
    graph.edges.push_back({other, id, edge_length(q, position), fwd});
    graph.edges.push_back({id, other, edge_length(q, position), bwd});
  }
  graph.rebuild_adjacency();
  return id;
}

RoomSubGraph build_room_sub_graph(const RoomGraph &rooms, std::size_t room_index, const GridMap &map,
                                  const DistanceField &field, const GraphParams &params) {
  const Room &room = rooms.rooms().at(room_index);
  std::vector<PlanNode> nodes;
  for (std::size_t d : room.doorways) {
    const Doorway &dw = rooms.doorways()[d];
    PlanNode door = make_node(dw.midpoint(), NodeKind::doorway, field, map);
    door.doorway = d;
    // The wall a doorway sits in is the one being touched while passing it:
    // its direction is the doorway normal pointing out of this room.
    Vec2 into = normalized(perp(dw.b - dw.a));
    const double probe = std::max(2.0 * map.resolution(), 0.15);
    if (!room.polygon.contains(dw.midpoint() + probe * into)) into = -into;
    door.wall_direction = -into;
    nodes.push_back(door);
  }
  const VisibilityRoadmap roadmap =
      build_visibility_roadmap(room, map, field, params.roadmap_budget, params.seed_offset, params.sample_clearance,
                               params.roadmap_sample_cap, params.complete_coverage);
  nodes.insert(nodes.end(), roadmap.nodes.begin(), roadmap.nodes.end());
  const MedialAxis axis = build_medial_axis(room, map, field);
  for (const Cell &c : axis.cells) nodes.push_back(make_node(map.cell_center(c), NodeKind::medial, field, map));
  const auto fill = fill_random(room, map, field, params.fill_density, params.seed_offset, params.fill_spacing,
                                params.sample_clearance, nodes);
  nodes.insert(nodes.end(), fill.begin(), fill.end());
  return connect_and_label(std::move(nodes), map, field, params.connection_radius, params.wall_band, room);
}

void build_all_sub_graphs(RoomGraph &rooms, const GridMap &map, const DistanceField &field,
                          const GraphParams &params) {
  for (std::size_t r = 0; r < rooms.rooms().size(); ++r) {
    rooms.publish_sub_graph(r, build_room_sub_graph(rooms, r, map, field, params));
  }
}

}  // namespace firesquad

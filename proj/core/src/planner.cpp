#include "firesquad/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <variant>

#include "firesquad/errors.hpp"

namespace firesquad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PathResult infeasible(std::string reason) {
  PathResult r;
  r.reason = std::move(reason);
  return r;
}

std::vector<NodeId> unwind(const std::vector<std::int64_t> &parent, NodeId goal) {
  std::vector<NodeId> path;
  for (std::int64_t v = goal; v >= 0; v = parent[v]) path.push_back(static_cast<NodeId>(v));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

double path_length(const RoomSubGraph &graph, const std::vector<NodeId> &nodes) {
  double total = 0.0;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    total += edge_length(graph.node(nodes[k - 1]).position, graph.node(nodes[k]).position);
  }
  return total;
}

PathResult plan_room(const RoomSubGraph &graph, NodeId entry, NodeId exit, Tactic tactic) {
  const std::size_t n = graph.size();
  if (entry >= n || exit >= n) throw std::out_of_range("plan_room: node id out of range");
  if (entry == exit) return PathResult{true, {entry}, 0.0, {}};

  const Vec2 goal = graph.node(exit).position;
  std::vector<double> g(n, kInf);
  std::vector<std::int64_t> parent(n, -1);
  using Entry = std::tuple<double, NodeId>;  // (f, id): ties go to the smaller id
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[entry] = 0.0;
  open.emplace(distance(graph.node(entry).position, goal), entry);
  while (!open.empty()) {
    const auto [f, u] = open.top();
    open.pop();
    if (f > g[u] + distance(graph.node(u).position, goal)) continue;  // stale
    if (u == exit) break;
    for (std::uint32_t e : graph.out[u]) {
      const PlanEdge &edge = graph.edges[e];
      if (!edge.permits.allows(tactic)) continue;
      const double cand = g[u] + edge.length;
      if (cand < g[edge.to]) {
        g[edge.to] = cand;
        parent[edge.to] = u;
        open.emplace(cand + distance(graph.node(edge.to).position, goal), edge.to);
      }
    }
  }
  if (!std::isfinite(g[exit])) {
    return infeasible("no " + std::string(to_string(tactic)) + " path from node " + std::to_string(entry) +
                      " to node " + std::to_string(exit) + " in room '" + graph.room + "'");
  }
  return PathResult{true, unwind(parent, exit), g[exit], {}};
}

namespace {

struct Tree {
  std::vector<double> cost;
  std::vector<std::int64_t> parent;
};

Tree dijkstra(const RoomSubGraph &graph, NodeId from, Tactic tactic, const std::vector<bool> *blocked = nullptr) {
  const std::size_t n = graph.size();
  Tree t{std::vector<double>(n, kInf), std::vector<std::int64_t>(n, -1)};
  using Entry = std::tuple<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  t.cost[from] = 0.0;
  open.emplace(0.0, from);
  while (!open.empty()) {
    const auto [c, u] = open.top();
    open.pop();
    if (c > t.cost[u]) continue;
    for (std::uint32_t e : graph.out[u]) {
      const PlanEdge &edge = graph.edges[e];
      if (!edge.permits.allows(tactic)) continue;
      if (blocked && (*blocked)[edge.to]) continue;
      const double cand = c + edge.length;
      if (cand < t.cost[edge.to]) {
        t.cost[edge.to] = cand;
        t.parent[edge.to] = u;
        open.emplace(cand, edge.to);
      }
    }
  }
  return t;
}

}  // namespace

std::vector<double> shortest_costs(const RoomSubGraph &graph, NodeId from, Tactic tactic) {
  return dijkstra(graph, from, tactic).cost;
}

PathResult plan_room_single_entry_free(const RoomSubGraph &graph, NodeId entry, const GridMap &map) {
  if (entry >= graph.size()) throw std::out_of_range("plan_room_single_entry_free: entry out of range");
  auto pos = [&](NodeId id) { return graph.node(id).position; };

  std::vector<NodeId> unvisited = graph.visibility_nodes;
  std::erase(unvisited, entry);
  std::vector<NodeId> stops{entry};
  std::vector<NodeId> visited{entry};
  NodeId current = entry;

  auto visit = [&](NodeId v) {
    std::erase(unvisited, v);
    stops.push_back(v);
    if (std::find(visited.begin(), visited.end(), v) == visited.end()) visited.push_back(v);
    current = v;
  };

  while (!unvisited.empty()) {
    // Extend the branch to the closest visible unvisited node.
    std::optional<NodeId> next;
    double best = kInf;
    for (NodeId v : unvisited) {
      const double d = distance(pos(current), pos(v));
      if ((d < best || (d == best && next && v < *next)) && line_of_sight(map, pos(current), pos(v))) {
        best = d;
        next = v;
      }
    }
    if (next) {
      visit(*next);
      continue;
    }
    // Leaf: branch again from the visited stop closest to something unvisited it can see.
    std::optional<std::pair<NodeId, NodeId>> branch;
    best = kInf;
    for (NodeId s : visited) {
      for (NodeId v : unvisited) {
        const double d = distance(pos(s), pos(v));
        if (d > best) continue;
        if (d == best && branch && std::make_pair(s, v) > *branch) continue;
        if (!line_of_sight(map, pos(s), pos(v))) continue;
        best = d;
        branch = std::make_pair(s, v);
      }
    }
    if (branch) {
      if (branch->first != current) stops.push_back(branch->first);
      visit(branch->second);
      continue;
    }
    // Nothing visible from any visited stop: go to the closest one by path cost.
    const Tree t = dijkstra(graph, current, Tactic::free);
    std::optional<NodeId> closest;
    for (NodeId v : unvisited) {
      if (!std::isfinite(t.cost[v])) continue;
      if (!closest || t.cost[v] < t.cost[*closest]) closest = v;
    }
    if (!closest) {
      return infeasible("visibility node " + std::to_string(unvisited.front()) + " unreachable in room '" +
                        graph.room + "'");
    }
    visit(*closest);
  }
  if (stops.back() != entry) stops.push_back(entry);

  PathResult out{true, {entry}, 0.0, {}};
  for (std::size_t k = 1; k < stops.size(); ++k) {
    if (stops[k] == stops[k - 1]) continue;
    const PathResult leg = plan_room(graph, stops[k - 1], stops[k], Tactic::free);
    if (!leg.feasible) {
      return infeasible("visibility node " + std::to_string(stops[k]) + " unreachable in room '" + graph.room + "'");
    }
    out.nodes.insert(out.nodes.end(), leg.nodes.begin() + 1, leg.nodes.end());
    out.cost += leg.cost;
  }
  return out;
}

PathResult plan_room_single_entry_wall(const RoomSubGraph &graph, NodeId entry, Tactic tactic) {
  if (!is_wall_tactic(tactic)) throw std::invalid_argument("plan_room_single_entry_wall: wall tactic required");
  if (entry >= graph.size()) throw std::out_of_range("plan_room_single_entry_wall: entry out of range");
  const Tactic opposite = tactic == Tactic::wall_rhr ? Tactic::wall_lhr : Tactic::wall_rhr;

  std::optional<std::uint32_t> first;
  for (std::uint32_t e : graph.out[entry]) {
    const PlanEdge &edge = graph.edges[e];
    if (!edge.permits.allows(tactic) || edge.permits.allows(opposite)) continue;
    if (!first || edge.length < graph.edges[*first].length) first = e;
  }
  if (!first) {
    return infeasible("no wall-band neighbour of the entry in " + std::string(to_string(tactic)) +
                      " direction in room '" + graph.room + "'");
  }
  const NodeId start = graph.edges[*first].to;
  const Vec2 door = graph.node(entry).position;

  // Block the entry and its neighbours behind the first step so the walk cannot
  // turn straight back out. The outbound leg runs to the reachable node with the
  // longest shortest path that still leads back to the entry, which takes it
  // around the room.
  std::vector<bool> blocked(graph.size(), false);
  blocked[entry] = true;
  for (std::uint32_t e : graph.out[entry]) {
    const PlanEdge &edge = graph.edges[e];
    if (edge.to != start && !edge.permits.allows(tactic)) blocked[edge.to] = true;
  }
  const Tree out_tree = dijkstra(graph, start, tactic, &blocked);
  std::vector<NodeId> order;
  for (NodeId v = 0; v < graph.size(); ++v) {
    if (std::isfinite(out_tree.cost[v])) order.push_back(v);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return out_tree.cost[a] > out_tree.cost[b]; });
  std::optional<NodeId> far;
  PathResult back;
  for (NodeId v : order) {
    back = plan_room(graph, v, entry, tactic);
    if (back.feasible) {
      far = v;
      break;
    }
  }
  if (!far) {
    return infeasible("wall band of room '" + graph.room + "' does not lead back to the entry under " +
                      std::string(to_string(tactic)));
  }
  PathResult out{true, {entry}, graph.edges[*first].length, {}};
  const std::vector<NodeId> outbound = unwind(out_tree.parent, *far);
  out.nodes.insert(out.nodes.end(), outbound.begin(), outbound.end());
  out.cost += out_tree.cost[*far];
  out.nodes.insert(out.nodes.end(), back.nodes.begin() + 1, back.nodes.end());
  out.cost += back.cost;
  return out;
}

// ---------------------------------------------------------------------------
// Missions
// ---------------------------------------------------------------------------

Tactic MissionRequest::tactic_for(const std::string &room) const {
  const auto it = room_tactics.find(room);
  return it == room_tactics.end() ? default_tactic : it->second;
}

std::vector<Waypoint> SquadPlan::waypoints() const {
  std::vector<Waypoint> out;
  for (const RoomSegment &s : segments) {
    for (const Waypoint &w : s.waypoints) {
      if (!out.empty() && distance(out.back().position, w.position) < 1e-9) {
        out.back().essential = out.back().essential || w.essential;
        continue;
      }
      out.push_back(w);
    }
  }
  return out;
}

double SquadPlan::length() const {
  double total = 0.0;
  for (const RoomSegment &s : segments) total += s.length;
  return total;
}

Tactic SquadPlan::tactic_in(const std::string &room) const {
  for (const RoomSegment &s : segments) {
    if (s.room == room) return s.used;
  }
  return Tactic::free;
}

namespace {

using Endpoint = std::variant<Vec2, std::size_t>;  // free point or doorway index

struct SegmentSpec {
  std::string room;
  SegmentKind kind = SegmentKind::pass;
  Endpoint from;
  Endpoint to;
};

struct Layout {
  std::vector<SegmentSpec> segments;
  std::string error;
  std::string failed_room;
};

Layout mission_layout(const RoomGraph &rooms, const MissionRequest &request) {
  Layout out;
  const auto route = room_route(rooms, request.start.room, request.goal.room);
  if (!route) {
    out.error = "goal room '" + request.goal.room + "' unreachable from '" + request.start.room + "'";
    out.failed_room = request.goal.room;
    return out;
  }
  // Search rooms grouped by the route room they open onto.
  std::map<std::string, std::vector<std::size_t>> detours;
  for (const std::string &id : request.search_rooms) {
    const Room &room = rooms.room(id);
    if (room.doorways.size() != 1) {
      out.error = "search room '" + id + "' must have exactly one doorway";
      out.failed_room = id;
      return out;
    }
    const Doorway &door = rooms.doorways()[room.doorways.front()];
    const std::string &host = door.other(id);
    if (std::find(route->rooms.begin(), route->rooms.end(), host) == route->rooms.end() ||
        std::find(route->rooms.begin(), route->rooms.end(), id) != route->rooms.end()) {
      out.error = "search room '" + id + "' does not open onto the route";
      out.failed_room = id;
      return out;
    }
    detours[host].push_back(room.doorways.front());
  }
  for (std::size_t k = 0; k < route->rooms.size(); ++k) {
    const std::string &room = route->rooms[k];
    Endpoint from = k == 0 ? Endpoint{request.start.point} : Endpoint{route->doorways[k - 1]};
    const Endpoint to = k + 1 == route->rooms.size() ? Endpoint{request.goal.point} : Endpoint{route->doorways[k]};
    for (std::size_t door : detours[room]) {
      out.segments.push_back({room, SegmentKind::pass, from, Endpoint{door}});
      out.segments.push_back({rooms.doorways()[door].other(room), SegmentKind::search, Endpoint{door}, Endpoint{door}});
      from = Endpoint{door};
    }
    out.segments.push_back({room, SegmentKind::pass, from, to});
  }
  return out;
}

NodeId resolve(RoomSubGraph &graph, const Endpoint &end, const GridMap &map, const DistanceField &field,
               const GraphParams &params) {
  if (const auto *door = std::get_if<std::size_t>(&end)) {
    const auto node = graph.doorway_node(*door);
    if (!node) throw std::logic_error("doorway node missing from sub-graph of room '" + graph.room + "'");
    return *node;
  }
  const Vec2 p = std::get<Vec2>(end);
  for (const PlanNode &n : graph.nodes) {
    if (distance(n.position, p) < 1e-9) return n.id;
  }
  if (map.blocked_at(p)) throw InputError("mission endpoint lies in occupied space");
  return attach_node(graph, p, NodeKind::anchor, map, field, params.connection_radius);
}

PathResult plan_segment(const RoomSubGraph &base, const SegmentSpec &spec, Tactic tactic, const GridMap &map,
                        const DistanceField &field, const GraphParams &params, RoomSubGraph &used_graph) {
  used_graph = base;
  const NodeId from = resolve(used_graph, spec.from, map, field, params);
  if (spec.kind == SegmentKind::search) {
    return is_wall_tactic(tactic) ? plan_room_single_entry_wall(used_graph, from, tactic)
                                  : plan_room_single_entry_free(used_graph, from, map);
  }
  const NodeId to = resolve(used_graph, spec.to, map, field, params);
  return plan_room(used_graph, from, to, tactic);
}

struct SegmentOutcome {
  bool feasible = false;
  RoomSegment segment;
  std::string reason;
  std::string warning;
};

SegmentOutcome build_segment(const RoomGraph &rooms, const SegmentSpec &spec, const MissionRequest &request,
                             const GridMap &map, const DistanceField &field, const GraphParams &params) {
  const auto idx = rooms.room_index(spec.room);
  const RoomSubGraph *base = idx ? rooms.sub_graph(*idx) : nullptr;
  if (!base) throw std::logic_error("sub-graph of room '" + spec.room + "' not published");

  SegmentOutcome out;
  out.segment.room = spec.room;
  out.segment.kind = spec.kind;
  out.segment.requested = request.tactic_for(spec.room);
  out.segment.used = out.segment.requested;

  RoomSubGraph graph;
  PathResult path = plan_segment(*base, spec, out.segment.requested, map, field, params, graph);
  if (!path.feasible && is_wall_tactic(out.segment.requested) && request.fallback_to_free) {
    out.warning = "room '" + spec.room + "': " + path.reason + "; falling back to FREE";
    path = plan_segment(*base, spec, Tactic::free, map, field, params, graph);
    out.segment.used = Tactic::free;
    out.segment.fell_back = true;
  }
  if (!path.feasible) {
    out.reason = path.reason;
    return out;
  }
  out.feasible = true;
  for (std::size_t k = 0; k < path.nodes.size(); ++k) {
    const PlanNode &node = graph.node(path.nodes[k]);
    const bool essential = k == 0 || k + 1 == path.nodes.size() || node.kind == NodeKind::doorway;
    out.segment.node_positions.push_back(node.position);
    if (!out.segment.waypoints.empty() && distance(out.segment.waypoints.back().position, node.position) < 1e-9) {
      out.segment.waypoints.back().essential = out.segment.waypoints.back().essential || essential;
      continue;
    }
    out.segment.waypoints.push_back({node.position, essential, spec.room});
  }
  out.segment.length = path_length(graph, path.nodes);
  return out;
}

MissionResult assemble(const RoomGraph &rooms, const GridMap &map, const DistanceField &field,
                       const MissionRequest &request, const GraphParams &params, const SquadPlan *previous,
                       const std::string *only_room) {
  MissionResult result;
  const Layout layout = mission_layout(rooms, request);
  if (!layout.error.empty()) {
    result.reason = layout.error;
    result.failed_room = layout.failed_room;
    return result;
  }
  if (previous && previous->segments.size() != layout.segments.size()) {
    throw std::logic_error("replan_room: previous plan does not match the mission layout");
  }
  result.plan.squad_id = request.squad_id;
  for (std::size_t k = 0; k < layout.segments.size(); ++k) {
    const SegmentSpec &spec = layout.segments[k];
    if (previous && spec.room != *only_room) {
      result.plan.segments.push_back(previous->segments[k]);
      continue;
    }
    SegmentOutcome seg = build_segment(rooms, spec, request, map, field, params);
    if (!seg.feasible) {
      result.reason = seg.reason;
      result.failed_room = spec.room;
      return result;
    }
    if (!seg.warning.empty()) result.plan.warnings.push_back(seg.warning);
    result.plan.segments.push_back(std::move(seg.segment));
  }
  if (previous) {
    for (const std::string &w : previous->warnings) {
      if (w.rfind("room '" + *only_room + "'", 0) != 0) result.plan.warnings.push_back(w);
    }
  }
  result.feasible = true;
  return result;
}

}  // namespace

MissionResult plan_mission(const RoomGraph &rooms, const GridMap &map, const DistanceField &field,
                           const MissionRequest &request, const GraphParams &params) {
  return assemble(rooms, map, field, request, params, nullptr, nullptr);
}

MissionResult replan_room(const SquadPlan &previous, const RoomGraph &rooms, const GridMap &map,
                          const DistanceField &field, const MissionRequest &request, const GraphParams &params,
                          const std::string &room) {
  return assemble(rooms, map, field, request, params, &previous, &room);
}

}  // namespace firesquad

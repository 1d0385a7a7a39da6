#include "firesquad/room_graph.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "firesquad/errors.hpp"

namespace firesquad {

namespace {

Vec2 parse_point(const YAML::Node &node, const std::string &context) {
  if (!node.IsSequence() || node.size() != 2) throw InputError(context + ": expected [x, y]");
  try {
    return {node[0].as<double>(), node[1].as<double>()};
  } catch (const YAML::Exception &) {
    throw InputError(context + ": coordinates must be numbers");
  }
}

std::string required_string(const YAML::Node &node, const char *key, const std::string &context) {
  const YAML::Node v = node[key];
  if (!v) throw InputError(context + ": missing key '" + key + "'");
  return v.as<std::string>();
}

}  // namespace

RoomAnnotation parse_room_annotation(const std::string &yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception &e) {
    throw InputError(std::string("room annotation: ") + e.what());
  }
  if (!root.IsMap()) throw InputError("room annotation: expected a mapping");
  RoomAnnotation out;
  const YAML::Node rooms = root["rooms"];
  if (!rooms || !rooms.IsSequence()) throw InputError("room annotation: missing 'rooms' list");
  for (const auto &r : rooms) {
    RoomAnnotation::RoomEntry entry;
    entry.id = required_string(r, "id", "room annotation");
    const std::string ctx = "room '" + entry.id + "'";
    const YAML::Node poly = r["polygon"];
    if (!poly || !poly.IsSequence()) throw InputError(ctx + ": missing 'polygon'");
    for (const auto &v : poly) entry.polygon.push_back(parse_point(v, ctx));
    out.rooms.push_back(std::move(entry));
  }
  if (const YAML::Node doors = root["doorways"]) {
    if (!doors.IsSequence()) throw InputError("room annotation: 'doorways' must be a list");
    for (const auto &d : doors) {
      RoomAnnotation::DoorwayEntry entry;
      entry.id = required_string(d, "id", "doorway");
      const std::string ctx = "doorway '" + entry.id + "'";
      entry.room_a = required_string(d, "room_a", ctx);
      entry.room_b = required_string(d, "room_b", ctx);
      const YAML::Node seg = d["segment"];
      if (!seg || !seg.IsSequence() || seg.size() != 2) throw InputError(ctx + ": 'segment' needs two points");
      entry.a = parse_point(seg[0], ctx);
      entry.b = parse_point(seg[1], ctx);
      out.doorways.push_back(std::move(entry));
    }
  }
  return out;
}

RoomAnnotation load_room_annotation_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path.string());
  return parse_room_annotation({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

// ---------------------------------------------------------------------------

RoomGraph::RoomGraph(std::vector<Room> rooms, std::vector<Doorway> doorways)
    : rooms_(std::move(rooms)), doorways_(std::move(doorways)), sub_graphs_(rooms_.size()) {}

std::optional<std::size_t> RoomGraph::room_index(std::string_view id) const {
  for (std::size_t k = 0; k < rooms_.size(); ++k) {
    if (rooms_[k].id == id) return k;
  }
  return std::nullopt;
}

const Room &RoomGraph::room(std::string_view id) const {
  const auto idx = room_index(id);
  if (!idx) throw InputError("unknown room '" + std::string(id) + "'");
  return rooms_[*idx];
}

std::optional<std::size_t> RoomGraph::room_containing(Vec2 p) const {
  for (std::size_t k = 0; k < rooms_.size(); ++k) {
    if (rooms_[k].polygon.contains(p)) return k;
  }
  return std::nullopt;
}

void RoomGraph::publish_sub_graph(std::size_t room, RoomSubGraph graph) {
  auto &slot = sub_graphs_.at(room);
  if (slot) throw std::logic_error("sub-graph of room '" + rooms_[room].id + "' already published");
  slot = std::make_shared<const RoomSubGraph>(std::move(graph));
}

RoomGraph RoomGraph::with_sub_graph(std::size_t room, RoomSubGraph graph) const {
  RoomGraph copy = *this;
  copy.sub_graphs_.at(room) = std::make_shared<const RoomSubGraph>(std::move(graph));
  return copy;
}

bool RoomGraph::all_sub_graphs_published() const {
  return std::all_of(sub_graphs_.begin(), sub_graphs_.end(), [](const auto &p) { return p != nullptr; });
}

// ---------------------------------------------------------------------------

namespace {

// Distance to the polygon's boundary, so doorways well inside a room do not count as adjacent.
double distance_to_boundary(Vec2 p, const Polygon &poly) {
  double best = std::numeric_limits<double>::infinity();
  const auto &v = poly.vertices;
  for (std::size_t k = 0; k < v.size(); ++k) {
    best = std::min(best, point_segment_distance(p, v[k], v[(k + 1) % v.size()]));
  }
  return best;
}

}  // namespace

RoomGraph load_rooms(const RoomAnnotation &annotation, const GridMap &map) {
  std::vector<Room> rooms;
  std::set<std::string> ids;
  for (const auto &entry : annotation.rooms) {
    if (entry.id.empty() || entry.id == kExterior) throw InputError("invalid room id '" + entry.id + "'");
    if (!ids.insert(entry.id).second) throw InputError("duplicate room id '" + entry.id + "'");
    Room room;
    room.id = entry.id;
    room.polygon.vertices = entry.polygon;
    if (!is_simple(room.polygon)) throw InputError("room '" + entry.id + "': polygon is not simple");
    rooms.push_back(std::move(room));
  }

  // Assign free cells; a free cell claimed by two polygons means overlap.
  std::vector<int> owner(map.cell_count(), -1);
  for (std::size_t r = 0; r < rooms.size(); ++r) {
    const Box2 b = rooms[r].polygon.bounds();
    const Vec2 glo = map.to_grid(b.lo), ghi = map.to_grid(b.hi);
    const int i0 = std::max(0, static_cast<int>(std::floor(glo.x)));
    const int j0 = std::max(0, static_cast<int>(std::floor(glo.y)));
    const int i1 = std::min(map.width() - 1, static_cast<int>(std::ceil(ghi.x)));
    const int j1 = std::min(map.height() - 1, static_cast<int>(std::ceil(ghi.y)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const Cell c{i, j};
        if (map.occupied(c) || !rooms[r].polygon.contains(map.cell_center(c))) continue;
        int &o = owner[map.index(c)];
        if (o >= 0) {
          throw InputError("overlapping room polygons: '" + rooms[o].id + "' and '" + rooms[r].id + "'");
        }
        o = static_cast<int>(r);
        rooms[r].cells.push_back(c);
      }
    }
  }

  const double tolerance = std::max(2.0 * map.resolution(), 0.15);
  std::vector<Doorway> doorways;
  for (const auto &entry : annotation.doorways) {
    Doorway d{entry.id, entry.room_a, entry.room_b == kExterior ? std::string{} : entry.room_b, entry.a, entry.b};
    const std::string ctx = "doorway '" + d.id + "'";
    auto check_room = [&](const std::string &id) -> std::size_t {
      const auto it = std::find_if(rooms.begin(), rooms.end(), [&](const Room &r) { return r.id == id; });
      if (it == rooms.end()) throw InputError(ctx + ": unknown room '" + id + "'");
      const double gap = std::min({distance_to_boundary(d.a, it->polygon), distance_to_boundary(d.b, it->polygon),
                                   distance_to_boundary(d.midpoint(), it->polygon)});
      if (gap > tolerance) throw InputError(ctx + ": not adjacent to room '" + id + "'");
      return static_cast<std::size_t>(it - rooms.begin());
    };
    const std::size_t ra = check_room(d.room_a);
    std::optional<std::size_t> rb;
    if (!d.to_exterior()) {
      if (d.room_b == d.room_a) throw InputError(ctx + ": links a room to itself");
      rb = check_room(d.room_b);
    }
    if (!line_of_sight(map, d.a, d.b)) throw InputError(ctx + ": segment is occupied");
    const std::size_t idx = doorways.size();
    rooms[ra].doorways.push_back(idx);
    if (rb) rooms[*rb].doorways.push_back(idx);
    doorways.push_back(std::move(d));
  }
  return RoomGraph(std::move(rooms), std::move(doorways));
}

// ---------------------------------------------------------------------------

std::optional<RoomRoute> room_route(const RoomGraph &graph, std::string_view start, std::string_view goal) {
  const auto start_index = graph.room_index(start);
  if (!start_index) throw InputError("unknown room '" + std::string(start) + "'");
  if (!graph.room_index(goal)) throw InputError("unknown room '" + std::string(goal) + "'");
  const std::size_t s = *start_index;
  if (start == goal) return RoomRoute{{std::string(start)}, {}, 0.0};

  struct Label {
    double cost;
    std::vector<std::string> rooms;
    std::vector<std::size_t> doorways;
  };
  auto better = [](const Label &a, const Label &b) {
    return std::tie(a.cost, a.rooms) < std::tie(b.cost, b.rooms);
  };
  // State: (room, doorway we arrived through); SIZE_MAX for the start.
  using State = std::pair<std::size_t, std::size_t>;
  std::map<State, Label> best;
  std::set<State> settled;
  const State origin{s, SIZE_MAX};
  best[origin] = Label{0.0, {graph.rooms()[s].id}, {}};

  while (true) {
    std::optional<State> pick;
    for (const auto &[state, label] : best) {
      if (settled.count(state)) continue;
      if (!pick || better(label, best.at(*pick))) pick = state;
    }
    if (!pick) return std::nullopt;
    const State cur = *pick;
    settled.insert(cur);
    const Label label = best.at(cur);
    const Room &room = graph.rooms()[cur.first];
    if (room.id == goal) return RoomRoute{label.rooms, label.doorways, label.cost};

    for (std::size_t d : room.doorways) {
      const Doorway &door = graph.doorways()[d];
      if (door.to_exterior()) continue;
      const std::string &next_id = door.other(room.id);
      if (std::find(label.rooms.begin(), label.rooms.end(), next_id) != label.rooms.end()) continue;
      const double leg = cur.second == SIZE_MAX
                             ? 0.0
                             : distance(graph.doorways()[cur.second].midpoint(), door.midpoint());
      Label next{label.cost + leg, label.rooms, label.doorways};
      next.rooms.push_back(next_id);
      next.doorways.push_back(d);
      const State ns{*graph.room_index(next_id), d};
      if (settled.count(ns)) continue;
      auto it = best.find(ns);
      if (it == best.end() || better(next, it->second)) best[ns] = std::move(next);
    }
  }
}

RoomSequence room_sequence(const RoomGraph &graph, std::string_view start, std::string_view goal) {
  const auto route = room_route(graph, start, goal);
  if (!route) return {};
  return {true, route->rooms};
}

}  // namespace firesquad

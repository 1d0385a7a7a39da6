#pragma once

// Building topology: rooms as nodes, doorways as links. Each room owns a
// write-once slot for its planning sub-graph.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "firesquad/geometry.hpp"
#include "firesquad/grid_map.hpp"
#include "firesquad/plan_graph.hpp"

namespace firesquad {

inline constexpr std::string_view kExterior = "exterior";

struct Doorway {
  std::string id;
  std::string room_a;
  // Empty when the doorway leads to the exterior.
  std::string room_b;
  Vec2 a{};
  Vec2 b{};

  Vec2 midpoint() const { return 0.5 * (a + b); }
  bool to_exterior() const { return room_b.empty(); }
  bool touches(std::string_view room) const { return room_a == room || room_b == room; }
  // Room on the other side, empty for the exterior.
  const std::string &other(std::string_view room) const { return room_a == room ? room_b : room_a; }
};

struct Room {
  std::string id;
  Polygon polygon;
  std::vector<std::size_t> doorways;
  // Free cells whose centers lie inside the polygon.
  std::vector<Cell> cells;
};

// Parsed room-annotation file, before validation against a map.
//
//   rooms:
//     - id: hall
//       polygon: [[0.0, 0.0], [6.0, 0.0], [6.0, 2.0], [0.0, 2.0]]
//   doorways:
//     - id: d1
//       room_a: hall
//       room_b: office        # or "exterior"
//       segment: [[2.0, 2.0], [2.9, 2.0]]
struct RoomAnnotation {
  struct RoomEntry {
    std::string id;
    std::vector<Vec2> polygon;
  };
  struct DoorwayEntry {
    std::string id;
    std::string room_a;
    std::string room_b;
    Vec2 a{};
    Vec2 b{};
  };
  std::vector<RoomEntry> rooms;
  std::vector<DoorwayEntry> doorways;
};

RoomAnnotation parse_room_annotation(const std::string &yaml_text);
RoomAnnotation load_room_annotation_file(const std::filesystem::path &path);

class RoomGraph {
 public:
  RoomGraph() = default;
  RoomGraph(std::vector<Room> rooms, std::vector<Doorway> doorways);

  const std::vector<Room> &rooms() const { return rooms_; }
  const std::vector<Doorway> &doorways() const { return doorways_; }
  std::optional<std::size_t> room_index(std::string_view id) const;
  // Throws InputError("unknown room ...").
  const Room &room(std::string_view id) const;
  std::optional<std::size_t> room_containing(Vec2 p) const;

  // Planning sub-graph of a room, or nullptr before it is published.
  const RoomSubGraph *sub_graph(std::size_t room) const { return sub_graphs_.at(room).get(); }
  // Write-once: throws std::logic_error when the slot is already filled.
  // Distinct slots may be published from different threads.
  void publish_sub_graph(std::size_t room, RoomSubGraph graph);
  // Copy sharing every other slot, with one room's sub-graph replaced.
  RoomGraph with_sub_graph(std::size_t room, RoomSubGraph graph) const;
  bool all_sub_graphs_published() const;

 private:
  std::vector<Room> rooms_;
  std::vector<Doorway> doorways_;
  std::vector<std::shared_ptr<const RoomSubGraph>> sub_graphs_;
};

// Validates the annotation against the map and assigns free cells to rooms.
// Errors: unknown room, overlapping room polygons, non-simple polygon,
// doorway not adjacent to a referenced room, occupied doorway segment.
RoomGraph load_rooms(const RoomAnnotation &annotation, const GridMap &map);

struct RoomRoute {
  std::vector<std::string> rooms;
  // doorways[k] joins rooms[k] and rooms[k+1].
  std::vector<std::size_t> doorways;
  double cost = 0.0;
};

struct RoomSequence {
  bool reachable = false;
  std::vector<std::string> rooms;
};

// Shortest route by summed midpoint distances between consecutive doorways;
// equal costs resolve to the lexicographically smaller room-id sequence.
std::optional<RoomRoute> room_route(const RoomGraph &graph, std::string_view start, std::string_view goal);
RoomSequence room_sequence(const RoomGraph &graph, std::string_view start, std::string_view goal);

}  // namespace firesquad

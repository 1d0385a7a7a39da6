#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "firesquad/geometry.hpp"

namespace firesquad {

enum class Tactic : std::uint8_t { free, wall_lhr, wall_rhr };

std::string_view to_string(Tactic t);
// Accepts FREE / WALL_LHR / WALL_RHR (also LHR / RHR), case-insensitive.
std::optional<Tactic> parse_tactic(std::string_view text);
constexpr bool is_wall_tactic(Tactic t) { return t != Tactic::free; }

// Bit set over tactics.
class Permits {
 public:
  constexpr Permits() = default;
  static constexpr Permits none() { return Permits{}; }
  static constexpr Permits only(Tactic t) { return Permits(bit(t)); }

  constexpr bool allows(Tactic t) const { return (bits_ & bit(t)) != 0; }
  constexpr Permits with(Tactic t) const { return Permits(bits_ | bit(t)); }
  constexpr std::uint8_t bits() const { return bits_; }
  friend constexpr bool operator==(Permits, Permits) = default;

 private:
  constexpr explicit Permits(std::uint8_t b) : bits_(b) {}
  static constexpr std::uint8_t bit(Tactic t) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(t)); }
  std::uint8_t bits_ = 0;
};

using NodeId = std::uint32_t;

// Edge length: the Euclidean distance rounded up to a multiple of 2^-20 m.
// Path sums over such lengths are exact, so equal-cost paths tie exactly
// whatever order the edges are added in, and the straight-line heuristic stays
// admissible.
double edge_length(Vec2 a, Vec2 b);

enum class NodeKind : std::uint8_t { medial, guard, connector, fill, doorway, anchor };

std::string_view to_string(NodeKind k);

struct PlanNode {
  NodeId id = 0;
  Vec2 position{};
  NodeKind kind = NodeKind::fill;
  double wall_distance = 0.0;
  // Unit direction towards the nearest obstacle, zero when undefined.
  Vec2 wall_direction{};
  // Index of the doorway this node stands in (doorway nodes only).
  std::optional<std::size_t> doorway;
};

struct PlanEdge {
  NodeId from = 0;
  NodeId to = 0;
  double length = 0.0;
  Permits permits;
};

// Planning graph of one room. Edge indices in `out` refer to `edges`; every
// edge u->v has a twin v->u (possibly with different permits).
struct RoomSubGraph {
  std::string room;
  std::vector<PlanNode> nodes;
  std::vector<PlanEdge> edges;
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<NodeId> visibility_nodes;
  std::vector<NodeId> entry_nodes;
  double wall_band = 0.0;

  std::size_t size() const { return nodes.size(); }
  const PlanNode &node(NodeId id) const { return nodes[id]; }
  // Edge u->v, if present.
  const PlanEdge *find_edge(NodeId u, NodeId v) const;
  // Entry node standing in the given doorway, if present.
  std::optional<NodeId> doorway_node(std::size_t doorway) const;
  void rebuild_adjacency();
};

}  // namespace firesquad

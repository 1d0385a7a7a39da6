#include "firesquad/plan_graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace firesquad {

double edge_length(Vec2 a, Vec2 b) {
  constexpr double unit = 1.0 / (1 << 20);
  return std::ceil(distance(a, b) / unit) * unit;
}

std::string_view to_string(Tactic t) {
  switch (t) {
    case Tactic::free:
      return "FREE";
    case Tactic::wall_lhr:
      return "WALL_LHR";
    case Tactic::wall_rhr:
      return "WALL_RHR";
  }
  return "?";
}

std::optional<Tactic> parse_tactic(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "FREE") return Tactic::free;
  if (upper == "WALL_LHR" || upper == "LHR") return Tactic::wall_lhr;
  if (upper == "WALL_RHR" || upper == "RHR") return Tactic::wall_rhr;
  return std::nullopt;
}

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::medial:
      return "medial";
    case NodeKind::guard:
      return "guard";
    case NodeKind::connector:
      return "connector";
    case NodeKind::fill:
      return "fill";
    case NodeKind::doorway:
      return "doorway";
    case NodeKind::anchor:
      return "anchor";
  }
  return "?";
}

const PlanEdge *RoomSubGraph::find_edge(NodeId u, NodeId v) const {
  if (u >= out.size()) return nullptr;
  for (std::uint32_t e : out[u]) {
    if (edges[e].to == v) return &edges[e];
  }
  return nullptr;
}

std::optional<NodeId> RoomSubGraph::doorway_node(std::size_t doorway) const {
  for (NodeId id : entry_nodes) {
    if (nodes[id].doorway == doorway) return id;
  }
  return std::nullopt;
}

void RoomSubGraph::rebuild_adjacency() {
  out.assign(nodes.size(), {});
  for (std::uint32_t e = 0; e < edges.size(); ++e) out[edges[e].from].push_back(e);
  for (auto &list : out) {
    std::sort(list.begin(), list.end(), [&](std::uint32_t a, std::uint32_t b) { return edges[a].to < edges[b].to; });
  }
}

}  // namespace firesquad

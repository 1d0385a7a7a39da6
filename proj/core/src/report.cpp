#include "firesquad/report.hpp"

#include <fmt/format.h>

#include <fstream>
#include <json.hpp>

#include "firesquad/errors.hpp"

namespace firesquad {

using nlohmann::json;

std::string trajectory_csv(const Trajectory &trajectory) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const TrajectoryRow &r : trajectory.rows) {
    const AgentState &s = r.state;
    out += fmt::format("{:.6f},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.t, r.squad_id, r.agent_id, s.p.x,
                       s.p.y, s.theta, s.v.x, s.v.y, s.omega);
  }
  return out;
}

namespace {

json point(Vec2 p) { return json::array({p.x, p.y}); }

const char *kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::medial: return "medial";
    case NodeKind::guard: return "guard";
    case NodeKind::connector: return "connector";
    case NodeKind::fill: return "fill";
    case NodeKind::doorway: return "doorway";
    case NodeKind::anchor: return "anchor";
  }
  return "unknown";
}

}  // namespace

std::string plan_json(const std::vector<SquadPlan> &plans) {
  json out = json::object();
  out["squads"] = json::array();
  for (const SquadPlan &p : plans) {
    json squad{{"id", p.squad_id}, {"length", p.length()}, {"warnings", p.warnings}};
    squad["segments"] = json::array();
    for (const RoomSegment &s : p.segments) {
      json seg{{"room", s.room},
               {"kind", s.kind == SegmentKind::pass ? "pass" : "search"},
               {"requested", to_string(s.requested)},
               {"used", to_string(s.used)},
               {"fell_back", s.fell_back},
               {"length", s.length}};
      seg["path"] = json::array();
      for (Vec2 v : s.node_positions) seg["path"].push_back(point(v));
      squad["segments"].push_back(seg);
    }
    squad["waypoints"] = json::array();
    for (const Waypoint &w : p.waypoints()) {
      squad["waypoints"].push_back({{"position", point(w.position)}, {"essential", w.essential}, {"room", w.room}});
    }
    out["squads"].push_back(squad);
  }
  return out.dump(2) + "\n";
}

std::string graph_json(const RoomGraph &rooms) {
  json out = json::object();
  out["rooms"] = json::array();
  for (std::size_t r = 0; r < rooms.rooms().size(); ++r) {
    const RoomSubGraph *g = rooms.sub_graph(r);
    json room{{"id", rooms.rooms()[r].id}};
    if (g == nullptr) {
      out["rooms"].push_back(room);
      continue;
    }
    room["wall_band"] = g->wall_band;
    room["nodes"] = json::array();
    for (const PlanNode &n : g->nodes) {
      json node{{"id", n.id}, {"position", point(n.position)}, {"kind", kind_name(n.kind)}, {"wall_distance", n.wall_distance}};
      if (n.doorway) node["doorway"] = rooms.doorways()[*n.doorway].id;
      room["nodes"].push_back(node);
    }
    room["edges"] = json::array();
    for (const PlanEdge &e : g->edges) {
      json permits = json::array();
      for (Tactic t : {Tactic::free, Tactic::wall_lhr, Tactic::wall_rhr}) {
        if (e.permits.allows(t)) permits.push_back(to_string(t));
      }
      room["edges"].push_back({{"from", e.from}, {"to", e.to}, {"length", e.length}, {"permits", permits}});
    }
    out["rooms"].push_back(room);
  }
  out["doorways"] = json::array();
  for (const Doorway &d : rooms.doorways()) {
    out["doorways"].push_back({{"id", d.id},
                               {"room_a", d.room_a},
                               {"room_b", d.to_exterior() ? std::string(kExterior) : d.room_b},
                               {"segment", json::array({point(d.a), point(d.b)})}});
  }
  return out.dump(2) + "\n";
}

std::string bench_json(const BenchReport &report, const std::string &scenario_name) {
  json out{{"scenario", scenario_name}};
  out["tactics"] = json::array();
  for (const TacticBench &t : report.tactics) {
    json entry{{"tactic", to_string(t.tactic)},
               {"repetitions", t.repetitions},
               {"feasible", t.feasible},
               {"completed", t.completed},
               {"aborted", t.aborted},
               {"mu_d", t.mean_d},
               {"s2_d", t.var_d},
               {"mu_t", t.mean_t},
               {"s2_t", t.var_t}};
    if (!t.note.empty()) entry["note"] = t.note;
    out["tactics"].push_back(entry);
  }
  return out.dump(2) + "\n";
}

std::string summary_json(const Trajectory &trajectory) {
  json out{{"status", to_string(trajectory.status)},
           {"t_end", trajectory.t_end},
           {"steps", trajectory.steps},
           {"penetration_events", trajectory.penetration_events},
           {"mean_path_length", trajectory.mean_path_length()}};
  out["agents"] = json::array();
  for (const AgentSummary &a : trajectory.agents) {
    json agent{{"squad_id", a.squad_id},
               {"agent_id", a.agent_id},
               {"path_length", a.path_length},
               {"waypoints_left", a.waypoints_left}};
    if (a.next_waypoint) agent["next_waypoint"] = point(*a.next_waypoint);
    out["agents"].push_back(agent);
  }
  return out.dump(2) + "\n";
}

void write_file(const std::filesystem::path &path, const std::string &content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace firesquad

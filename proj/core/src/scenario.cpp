#include "firesquad/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "firesquad/errors.hpp"

namespace firesquad {

void Scenario::override_tactic(Tactic tactic) {
  for (SquadSpec &s : squads) {
    s.tactic = tactic;
    s.room_tactics.clear();
  }
}

MissionRequest mission_request(const SquadSpec &squad, bool fallback_to_free) {
  MissionRequest r;
  r.squad_id = squad.id;
  r.start = squad.start;
  r.goal = squad.goal;
  r.default_tactic = squad.tactic;
  r.room_tactics = squad.room_tactics;
  r.search_rooms = squad.search;
  r.fallback_to_free = fallback_to_free;
  return r;
}

namespace {

template <class T>
T scalar(const YAML::Node &node, const std::string &context) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception &) {
    throw InputError(context + ": invalid value");
  }
}

void check_keys(const YAML::Node &node, const std::set<std::string> &allowed, const std::string &context) {
  if (!node.IsMap()) throw InputError(context + ": expected a mapping");
  for (const auto &kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw InputError(context + ": unknown key '" + key + "'");
  }
}

Tactic tactic_value(const YAML::Node &node, const std::string &context) {
  const auto text = scalar<std::string>(node, context);
  const auto t = parse_tactic(text);
  if (!t) throw InputError(context + ": unknown tactic '" + text + "'");
  return *t;
}

Vec2 point_value(const YAML::Node &node, const std::string &context) {
  if (!node.IsSequence() || node.size() != 2) throw InputError(context + ": expected [x, y]");
  return {scalar<double>(node[0], context), scalar<double>(node[1], context)};
}

RoomPoint room_point(const YAML::Node &node, const std::string &context) {
  if (!node) throw InputError(context + ": missing");
  check_keys(node, {"room", "point"}, context);
  if (!node["room"] || !node["point"]) throw InputError(context + ": needs 'room' and 'point'");
  return {scalar<std::string>(node["room"], context), point_value(node["point"], context)};
}

using Setter = std::function<void(double)>;

void apply_overrides(const YAML::Node &node, const std::map<std::string, Setter> &setters, const std::string &context) {
  if (!node) return;
  if (!node.IsMap()) throw InputError(context + ": expected a mapping");
  for (const auto &kv : node) {
    const auto key = kv.first.as<std::string>();
    const auto it = setters.find(key);
    if (it == setters.end()) throw InputError(context + ": unknown parameter '" + key + "'");
    it->second(scalar<double>(kv.second, context + "." + key));
  }
}

std::map<std::string, Setter> graph_setters(GraphParams &g) {
  return {
      {"connection_radius", [&g](double v) { g.connection_radius = v; }},
      {"wall_band", [&g](double v) { g.wall_band = v; }},
      {"fill_density", [&g](double v) { g.fill_density = v; }},
      {"fill_spacing", [&g](double v) { g.fill_spacing = v; }},
      {"sample_clearance", [&g](double v) { g.sample_clearance = v; }},
      {"roadmap_budget", [&g](double v) { g.roadmap_budget = static_cast<int>(v); }},
      {"roadmap_sample_cap", [&g](double v) { g.roadmap_sample_cap = static_cast<int>(v); }},
      {"complete_coverage", [&g](double v) { g.complete_coverage = v != 0.0; }},
  };
}

std::map<std::string, Setter> model_setters(SimParams &p) {
  return {
      {"v_des_free", [&p](double v) { p.v_des_free = v; }},
      {"v_des_restricted", [&p](double v) { p.v_des_restricted = v; }},
      {"tau", [&p](double v) { p.control.tau = v; }},
      {"c_o", [&p](double v) { p.control.c_o = v; }},
      {"c_des", [&p](double v) { p.control.c_des = v; }},
      {"k_lambda", [&p](double v) { p.control.k_lambda = v; }},
      {"alpha", [&p](double v) { p.control.alpha = v; }},
      {"mass", [&p](double v) { p.mass = v; }},
      {"radius", [&p](double v) { p.radius = v; }},
      {"spawn_spacing", [&p](double v) { p.spawn_spacing = v; }},
      {"hand_offset", [&p](double v) { p.hand_offset = v; }},
      {"hand_range", [&p](double v) { p.hand_range = v; }},
      {"a_intra", [&p](double v) { p.social.a_intra = v; }},
      {"a_inter", [&p](double v) { p.social.a_inter = v; }},
      {"b", [&p](double v) { p.social.b = v; }},
      {"lookahead", [&p](double v) { p.social.lookahead = v; }},
      {"k_coh_free", [&p](double v) { p.k_coh_free = v; }},
      {"k_coh_restricted", [&p](double v) { p.k_coh_restricted = v; }},
      {"d_coh_free", [&p](double v) { p.d_coh_free = v; }},
      {"d_coh_restricted", [&p](double v) { p.d_coh_restricted = v; }},
      {"c_s", [&p](double v) { p.contact.c_s = v; }},
      {"phi0_b", [&p](double v) { p.contact.phi0_b = v; }},
      {"c_b", [&p](double v) { p.contact.c_b = v; }},
      {"phi0_s", [&p](double v) { p.contact.phi0_s = v; }},
      {"d_min", [&p](double v) { p.contact.d_min = v; }},
      {"quadrant_range", [&p](double v) { p.contact.quadrant_range = v; }},
      {"cone_range_free", [&p](double v) { p.waypoints.cone_range_free = v; }},
      {"cone_range_restricted", [&p](double v) { p.waypoints.cone_range_restricted = v; }},
      {"cone_angle", [&p](double v) { p.waypoints.cone_angle = v; }},
      {"circle_range", [&p](double v) { p.waypoints.circle_range = v; }},
      {"essential_circle_range", [&p](double v) { p.waypoints.essential_circle_range = v; }},
  };
}

void validate(const Scenario &s) {
  if (!(s.dt > 0.0)) throw InputError("scenario: dt must be positive");
  if (s.dt_report && !(*s.dt_report > 0.0)) throw InputError("scenario: dt_report must be positive");
  if (s.t_max && !(*s.t_max > 0.0)) throw InputError("scenario: t_max must be positive");
  const SimParams &p = s.sim;
  if (!(p.mass > 0.0) || !(p.radius > 0.0)) throw InputError("scenario: mass and radius must be positive");
  if (!(p.v_des_free > 0.0) || !(p.v_des_restricted > 0.0) || !(p.control.tau > 0.0)) {
    throw InputError("scenario: v_des and tau must be positive");
  }
  if (p.control.c_o < 0.0 || p.control.c_des < 0.0) throw InputError("scenario: c_o and c_des must be non-negative");
  if (p.contact.c_s < 0.0 || p.contact.c_s > 1.0) throw InputError("scenario: c_s must lie in [0, 1]");
  if (!(p.contact.phi0_b > 0.0) || !(p.contact.c_b > 0.0) || !(p.contact.phi0_s > 0.0)) {
    throw InputError("scenario: phi0_b, c_b and phi0_s must be positive");
  }
  if (p.contact.d_min < 0.0 || p.contact.d_min >= p.radius) throw InputError("scenario: d_min must lie in [0, radius)");
  if (s.squads.empty()) throw InputError("scenario: no squads");
  std::set<int> ids;
  for (const SquadSpec &q : s.squads) {
    if (!ids.insert(q.id).second) throw InputError("scenario: duplicate squad id " + std::to_string(q.id));
    if (q.agents < 1) throw InputError("squad " + std::to_string(q.id) + ": needs at least one agent");
    if (!q.poses.empty() && static_cast<int>(q.poses.size()) != q.agents) {
      throw InputError("squad " + std::to_string(q.id) + ": poses must list one pose per agent");
    }
  }
}

}  // namespace

Scenario parse_scenario(const std::string &yaml_text, const std::filesystem::path &base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception &e) {
    throw InputError(std::string("scenario: ") + e.what());
  }
  check_keys(root, {"map", "rooms", "dt", "dt_report", "t_max", "seed", "fallback_to_free", "graph", "model", "squads"},
             "scenario");
  Scenario s;
  if (!root["map"] || !root["rooms"]) throw InputError("scenario: 'map' and 'rooms' are required");
  auto resolve = [&](const YAML::Node &n) {
    std::filesystem::path p = scalar<std::string>(n, "scenario");
    return p.is_absolute() ? p : base_dir / p;
  };
  s.map_path = resolve(root["map"]);
  s.rooms_path = resolve(root["rooms"]);
  if (root["dt"]) s.dt = scalar<double>(root["dt"], "scenario.dt");
  if (root["dt_report"]) s.dt_report = scalar<double>(root["dt_report"], "scenario.dt_report");
  if (root["t_max"]) s.t_max = scalar<double>(root["t_max"], "scenario.t_max");
  if (root["seed"]) s.seed = scalar<std::uint64_t>(root["seed"], "scenario.seed");
  if (root["fallback_to_free"]) s.fallback_to_free = scalar<bool>(root["fallback_to_free"], "scenario.fallback_to_free");
  apply_overrides(root["graph"], graph_setters(s.graph), "scenario.graph");
  apply_overrides(root["model"], model_setters(s.sim), "scenario.model");

  const YAML::Node squads = root["squads"];
  if (!squads || !squads.IsSequence()) throw InputError("scenario: missing 'squads' list");
  for (const auto &node : squads) {
    check_keys(node, {"id", "agents", "start", "goal", "tactic", "room_tactics", "search", "vision", "poses"}, "squad");
    SquadSpec q;
    if (!node["id"]) throw InputError("squad: missing 'id'");
    q.id = scalar<int>(node["id"], "squad.id");
    const std::string ctx = "squad " + std::to_string(q.id);
    if (node["agents"]) q.agents = scalar<int>(node["agents"], ctx + ".agents");
    q.start = room_point(node["start"], ctx + ".start");
    q.goal = room_point(node["goal"], ctx + ".goal");
    if (node["tactic"]) q.tactic = tactic_value(node["tactic"], ctx + ".tactic");
    if (const YAML::Node rt = node["room_tactics"]) {
      if (!rt.IsMap()) throw InputError(ctx + ".room_tactics: expected a mapping");
      for (const auto &kv : rt) q.room_tactics[kv.first.as<std::string>()] = tactic_value(kv.second, ctx + ".room_tactics");
    }
    if (const YAML::Node search = node["search"]) {
      if (!search.IsSequence()) throw InputError(ctx + ".search: expected a list");
      for (const auto &r : search) q.search.push_back(scalar<std::string>(r, ctx + ".search"));
    }
    if (node["vision"]) {
      const auto v = scalar<std::string>(node["vision"], ctx + ".vision");
      if (v == "auto") q.vision = VisionMode::automatic;
      else if (v == "free") q.vision = VisionMode::free;
      else if (v == "restricted") q.vision = VisionMode::restricted;
      else throw InputError(ctx + ".vision: expected auto, free or restricted");
    }
    if (const YAML::Node poses = node["poses"]) {
      if (!poses.IsSequence()) throw InputError(ctx + ".poses: expected a list");
      for (const auto &p : poses) {
        if (!p.IsSequence() || p.size() != 3) throw InputError(ctx + ".poses: expected [x, y, theta]");
        q.poses.push_back({{scalar<double>(p[0], ctx), scalar<double>(p[1], ctx)}, scalar<double>(p[2], ctx)});
      }
    }
    s.squads.push_back(std::move(q));
  }
  validate(s);
  return s;
}

Scenario load_scenario_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.parent_path());
}

}  // namespace firesquad

#include "firesquad/simulation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "firesquad/errors.hpp"
#include "firesquad/graph_build.hpp"

namespace firesquad {

Environment make_environment(GridMap map, const RoomAnnotation &annotation, const GraphParams &params) {
  DistanceField field = distance_transform(map);
  RoomGraph rooms = load_rooms(annotation, map);
  build_all_sub_graphs(rooms, map, field, params);
  return Environment{std::move(map), std::move(field), std::move(rooms)};
}

Environment load_environment(const Scenario &scenario, std::uint64_t seed) {
  GraphParams params = scenario.graph;
  params.seed_offset = seed;
  return make_environment(load_map_file(scenario.map_path), load_room_annotation_file(scenario.rooms_path), params);
}

PlanSet plan_squads(const Scenario &scenario, const Environment &env) {
  PlanSet out;
  GraphParams params = scenario.graph;
  for (const SquadSpec &squad : scenario.squads) {
    const MissionResult r =
        plan_mission(env.rooms, env.map, env.field, mission_request(squad, scenario.fallback_to_free), params);
    if (!r.feasible) {
      out.feasible = false;
      out.reason = "squad " + std::to_string(squad.id) + ": " + r.reason;
      out.failed_squad = squad.id;
      return out;
    }
    out.plans.push_back(r.plan);
  }
  return out;
}

std::size_t World::agent_count() const {
  std::size_t n = 0;
  for (const SquadState &s : squads) n += s.agents.size();
  return n;
}

bool World::done() const {
  for (const SquadState &s : squads) {
    for (const WaypointTracker &t : s.trackers) {
      if (!t.done()) return false;
    }
  }
  return true;
}

namespace {

bool spawn_spot_ok(Vec2 p, const Environment &env, double radius, const std::vector<AgentState> &placed,
                   double spacing) {
  if (env.map.blocked_at(p) || env.field.at(p) < radius + 0.05) return false;
  return std::all_of(placed.begin(), placed.end(),
                     [&](const AgentState &a) { return distance(a.p, p) >= spacing - 1e-9; });
}

AgentState make_agent(const SimParams &params, Vec2 p, double theta) {
  AgentState a;
  a.p = p;
  a.theta = wrap_angle(theta);
  a.m = params.mass;
  a.r = params.radius;
  a.I = 0.5 * params.mass * params.radius * params.radius;
  return a;
}

Vision auto_vision(const SquadState &squad, const WaypointTracker &tracker, Vision current) {
  if (squad.vision_override) return *squad.vision_override;
  if (tracker.done()) return current;
  const auto it = squad.room_tactics.find(tracker.remaining.front().room);
  const Tactic t = it == squad.room_tactics.end() ? Tactic::free : it->second;
  return is_wall_tactic(t) ? Vision::restricted : Vision::free;
}

}  // namespace

std::vector<Waypoint> hand_side_waypoints(const std::vector<Waypoint> &waypoints,
                                          const std::map<std::string, Tactic> &room_tactics, const GridMap &map,
                                          const SimParams &params) {
  std::vector<Waypoint> out = waypoints;
  const double step = 0.25 * map.resolution();
  for (std::size_t k = 0; k < waypoints.size(); ++k) {
    const Waypoint &w = waypoints[k];
    if (k == 0 || k + 1 == waypoints.size()) continue;
    const auto it = room_tactics.find(w.room);
    if (it == room_tactics.end() || !is_wall_tactic(it->second)) continue;
    const Vec2 prev = waypoints[k == 0 ? 0 : k - 1].position;
    const Vec2 next = waypoints[std::min(k + 1, waypoints.size() - 1)].position;
    if (distance(prev, next) < 1e-9) continue;
    const Vec2 left = perp(normalized(next - prev));
    const Vec2 hand = it->second == Tactic::wall_lhr ? left : -1.0 * left;
    // March towards the hand side until the wall.
    std::optional<double> wall;
    for (double s = 0.0; s <= params.hand_range + params.radius; s += step) {
      if (map.blocked_at(w.position + s * hand)) {
        wall = s;
        break;
      }
    }
    if (!wall || *wall <= params.hand_offset) continue;
    out[k].position = w.position + (*wall - params.hand_offset) * hand;
  }
  return out;
}

World spawn_world(const Scenario &scenario, const std::vector<SquadPlan> &plans, const Environment &env) {
  if (plans.size() != scenario.squads.size()) throw std::logic_error("spawn_world: one plan per squad expected");
  const SimParams &params = scenario.sim;
  World world;
  for (std::size_t q = 0; q < plans.size(); ++q) {
    const SquadSpec &spec = scenario.squads[q];
    const std::vector<Waypoint> waypoints = plans[q].waypoints();
    SquadState squad;
    squad.id = spec.id;
    if (spec.vision == VisionMode::free) squad.vision_override = Vision::free;
    if (spec.vision == VisionMode::restricted) squad.vision_override = Vision::restricted;
    for (const RoomSegment &seg : plans[q].segments) squad.room_tactics[seg.room] = seg.used;
    const std::vector<Waypoint> targets = hand_side_waypoints(waypoints, squad.room_tactics, env.map, params);

    Vec2 dir{1.0, 0.0};
    for (const Waypoint &w : waypoints) {
      if (distance(w.position, spec.start.point) > 1e-6) {
        dir = normalized(w.position - spec.start.point);
        break;
      }
    }
    const double heading = angle_of(dir);
    if (!spec.poses.empty()) {
      for (const Pose &p : spec.poses) {
        if (env.map.blocked_at(p.p)) {
          throw InputError(fmt::format("squad {}: pose ({}, {}) lies in occupied space", spec.id, p.p.x, p.p.y));
        }
        squad.agents.push_back(make_agent(params, p.p, p.theta));
      }
    } else {
      if (env.map.blocked_at(spec.start.point)) {
        throw InputError(fmt::format("squad {}: start point lies in occupied space", spec.id));
      }
      squad.agents.push_back(make_agent(params, spec.start.point, heading));
      // Further agents line up behind the start, or as close to that as free space allows.
      constexpr std::array<double, 8> turns{0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 1.0};
      for (int k = 1; k < spec.agents; ++k) {
        std::optional<Vec2> spot;
        for (int mult = 1; mult <= 8 && !spot; ++mult) {
          for (double turn : turns) {
            const Vec2 p = spec.start.point + mult * params.spawn_spacing *
                                                  unit_from_angle(heading + std::numbers::pi + turn * std::numbers::pi);
            if (spawn_spot_ok(p, env, params.radius, squad.agents, params.spawn_spacing)) {
              spot = p;
              break;
            }
          }
        }
        if (!spot) throw InputError(fmt::format("squad {}: no free space to place agent {}", spec.id, k));
        squad.agents.push_back(make_agent(params, *spot, heading));
      }
    }
    for (std::size_t a = 0; a < squad.agents.size(); ++a) {
      WaypointTracker t;
      t.params = params.waypoints;
      t.remaining.assign(targets.begin(), targets.end());
      squad.trackers.push_back(std::move(t));
      squad.vision.push_back(Vision::free);
      squad.targets.push_back(std::nullopt);
    }
    GeodesicGuide guide(env.map);
    for (std::size_t a = 0; a < squad.agents.size(); ++a) {
      squad.vision[a] = auto_vision(squad, squad.trackers[a], Vision::free);
      squad.targets[a] = steering_target(squad.trackers[a], squad.agents[a], &env.map, &guide);
    }
    world.squads.push_back(std::move(squad));
  }
  return world;
}

ForceBreakdown agent_forces(const World &world, std::size_t squad, std::size_t agent, const GridMap &map,
                            const SimParams &params) {
  const SquadState &sq = world.squads[squad];
  const AgentState &a = sq.agents[agent];
  const Vision vision = sq.vision[agent];

  ControlParams cp = params.control;
  cp.v_des = params.v_des(vision);
  const GoalForce goal = goal_force(a, sq.targets[agent].value_or(a.p), cp);

  Vec2 f_agents{};
  for (std::size_t s = 0; s < world.squads.size(); ++s) {
    for (std::size_t j = 0; j < world.squads[s].agents.size(); ++j) {
      if (s == squad && j == agent) continue;
      f_agents += agent_agent_force(a, world.squads[s].agents[j], s == squad, params.social);
    }
  }
  SocialParams sp = params.social;
  sp.d_coh = params.d_coh(vision);
  sp.k_coh = params.k_coh(vision);
  // Cohesion only towards squad mates the agent can see.
  std::vector<AgentState> seen;
  for (std::size_t j = 0; j < sq.agents.size(); ++j) {
    if (j == agent || line_of_sight(map, a.p, sq.agents[j].p)) seen.push_back(sq.agents[j]);
  }
  // Agents that have finished hold their position.
  const Vec2 f_coh = sq.targets[agent] ? cohesion_force(a, seen, sp) : Vec2{};
  f_agents += f_coh;

  Vec2 f_border{};
  for (const ContactSample &c : border_contacts(a, map, params.contact)) f_border += border_force(c, a, params.contact);
  return make_breakdown(goal, f_agents, f_border);
}

Simulator::Simulator(const GridMap &map, SimParams params) : map_(map), params_(std::move(params)), guide_(map) {}

bool Simulator::update_trackers(World &world) const {
  bool changed = false;
  for (SquadState &sq : world.squads) {
    for (std::size_t a = 0; a < sq.agents.size(); ++a) {
      WaypointTracker &t = sq.trackers[a];
      const Vision before = sq.vision[a];
      if (update_waypoints(t, sq.agents[a], before, &map_) > 0) changed = true;
      sq.vision[a] = auto_vision(sq, t, before);
      // Re-check with the cone of the new vision.
      if (sq.vision[a] != before) {
        changed = true;
        update_waypoints(t, sq.agents[a], sq.vision[a], &map_);
        sq.vision[a] = auto_vision(sq, t, sq.vision[a]);
      }
      const std::optional<Vec2> target = steering_target(t, sq.agents[a], &map_, &guide_);
      if (target != sq.targets[a]) changed = true;
      sq.targets[a] = target;
    }
  }
  return changed;
}

namespace {

constexpr std::size_t kStride = 6;  // x, y, theta, vx, vy, omega

void pack(const World &world, OdeState &x) {
  x.clear();
  for (const SquadState &sq : world.squads) {
    for (const AgentState &a : sq.agents) x.insert(x.end(), {a.p.x, a.p.y, a.theta, a.v.x, a.v.y, a.omega});
  }
}

void unpack(const OdeState &x, World &world) {
  std::size_t k = 0;
  for (SquadState &sq : world.squads) {
    for (AgentState &a : sq.agents) {
      a.p = {x[k], x[k + 1]};
      a.theta = x[k + 2];
      a.v = {x[k + 3], x[k + 4]};
      a.omega = x[k + 5];
      k += kStride;
    }
  }
}

std::string snapshot(const World &world) {
  std::string out = fmt::format("t={}", world.t);
  for (const SquadState &sq : world.squads) {
    for (std::size_t a = 0; a < sq.agents.size(); ++a) {
      const AgentState &s = sq.agents[a];
      out += fmt::format("\nsquad {} agent {}: p=({}, {}) theta={} v=({}, {}) omega={}", sq.id, a, s.p.x, s.p.y,
                         s.theta, s.v.x, s.v.y, s.omega);
    }
  }
  return out;
}

}  // namespace

void Simulator::step(World &world, double dt) {
  if (world.agent_count() == 0) {
    world.t += dt;
    return;
  }
  OdeState x;
  pack(world, x);
  const OdeRhs rhs = [&](const OdeState &y, OdeState &dydt, double) {
    unpack(y, world);
    dydt.resize(y.size());
    std::size_t k = 0;
    for (std::size_t s = 0; s < world.squads.size(); ++s) {
      const SquadState &sq = world.squads[s];
      for (std::size_t a = 0; a < sq.agents.size(); ++a) {
        const AgentState &agent = sq.agents[a];
        const ForceBreakdown fb = agent_forces(world, s, a, map_, params_);
        ControlParams cp = params_.control;
        cp.v_des = params_.v_des(sq.vision[a]);
        const TorqueGains gains = torque_gains(agent.I, norm(fb.f_acc), cp);
        const StateDerivative d = dynamics(agent, control_inputs(agent, fb, cp, gains));
        dydt[k] = d.p_dot.x;
        dydt[k + 1] = d.p_dot.y;
        dydt[k + 2] = d.theta_dot;
        dydt[k + 3] = d.v_dot.x;
        dydt[k + 4] = d.v_dot.y;
        dydt[k + 5] = d.omega_dot;
        k += kStride;
      }
    }
  };
  stepper_.step(rhs, x, world.t, dt);
  if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
    unpack(x, world);
    throw SimulationAborted(fmt::format("non-finite agent state at t={}", world.t + dt), snapshot(world));
  }
  bool wrapped = false;
  for (std::size_t k = 2; k < x.size(); k += kStride) {
    const double w = wrap_angle(x[k]);
    wrapped = wrapped || w != x[k];
    x[k] = w;
  }
  unpack(x, world);
  world.t += dt;
  // The cached end-of-step derivative is stale once targets or angles change.
  if (update_trackers(world) || wrapped) stepper_.reset();
}

const char *to_string(RunStatus s) { return s == RunStatus::completed ? "completed" : "timeout"; }

double Trajectory::mean_path_length() const {
  if (agents.empty()) return 0.0;
  double total = 0.0;
  for (const AgentSummary &a : agents) total += a.path_length;
  return total / static_cast<double>(agents.size());
}

Trajectory run(World world, const GridMap &map, const SimParams &params, const RunOptions &options) {
  if (!(options.dt > 0.0)) throw InputError("dt must be positive");
  const auto report_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.dt_report / options.dt)));
  Trajectory traj;
  Simulator sim(map, params);
  sim.update_trackers(world);

  for (const SquadState &sq : world.squads) {
    for (std::size_t a = 0; a < sq.agents.size(); ++a) traj.agents.push_back({sq.id, static_cast<int>(a), 0.0});
  }
  auto record = [&] {
    for (const SquadState &sq : world.squads) {
      for (std::size_t a = 0; a < sq.agents.size(); ++a) {
        traj.rows.push_back({world.t, sq.id, static_cast<int>(a), sq.agents[a]});
        if (map.blocked_at(sq.agents[a].p)) ++traj.penetration_events;
      }
    }
  };
  std::vector<Vec2> previous;
  auto positions = [&] {
    std::vector<Vec2> p;
    for (const SquadState &sq : world.squads) {
      for (const AgentState &a : sq.agents) p.push_back(a.p);
    }
    return p;
  };

  const double t0 = world.t;
  const auto start = std::chrono::steady_clock::now();
  record();
  previous = positions();
  while (!world.done() && world.t < options.t_max - 1e-9) {
    sim.step(world, options.dt);
    ++traj.steps;
    world.t = t0 + static_cast<double>(traj.steps) * options.dt;
    const std::vector<Vec2> now = positions();
    for (std::size_t k = 0; k < now.size(); ++k) traj.agents[k].path_length += distance(previous[k], now[k]);
    previous = now;
    if (traj.steps % report_every == 0) record();
  }
  traj.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  traj.status = world.done() ? RunStatus::completed : RunStatus::timeout;
  std::size_t k = 0;
  for (const SquadState &sq : world.squads) {
    for (const WaypointTracker &t : sq.trackers) {
      traj.agents[k].waypoints_left = t.remaining.size();
      if (!t.done()) traj.agents[k].next_waypoint = t.remaining.front().position;
      ++k;
    }
  }
  traj.t_end = world.t;
  return traj;
}

RunOptions run_options(const Scenario &scenario, const std::vector<SquadPlan> &plans) {
  RunOptions o;
  o.dt = scenario.dt;
  o.dt_report = scenario.dt_report.value_or(scenario.dt);
  if (scenario.t_max) {
    o.t_max = *scenario.t_max;
    return o;
  }
  double longest = 0.0;
  for (std::size_t q = 0; q < plans.size() && q < scenario.squads.size(); ++q) {
    const SquadSpec &spec = scenario.squads[q];
    bool restricted = spec.vision == VisionMode::restricted;
    if (spec.vision == VisionMode::automatic) {
      for (const RoomSegment &s : plans[q].segments) restricted = restricted || is_wall_tactic(s.used);
    }
    const double v = restricted ? scenario.sim.v_des_restricted : scenario.sim.v_des_free;
    longest = std::max(longest, plans[q].length() / v);
  }
  o.t_max = std::max(10.0, 10.0 * longest);
  return o;
}

namespace {

std::pair<double, double> mean_and_variance(const std::vector<double> &xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / static_cast<double>(xs.size() - 1)};
}

}  // namespace

BenchReport bench(const Scenario &scenario, int repetitions, const std::vector<Tactic> &tactics) {
  if (repetitions < 1) throw InputError("repetitions must be at least 1");
  const GridMap map = load_map_file(scenario.map_path);
  const RoomAnnotation annotation = load_room_annotation_file(scenario.rooms_path);
  BenchReport report;
  for (Tactic tactic : tactics) {
    Scenario s = scenario;
    s.override_tactic(tactic);
    TacticBench tb;
    tb.tactic = tactic;
    tb.repetitions = repetitions;
    std::vector<double> lengths, times;
    std::string first_failure;
    for (int k = 0; k < repetitions; ++k) {
      GraphParams params = s.graph;
      params.seed_offset = s.seed + static_cast<std::uint64_t>(k);
      const Environment env = make_environment(map, annotation, params);
      const PlanSet plans = plan_squads(s, env);
      if (!plans.feasible) {
        if (first_failure.empty()) first_failure = plans.reason;
        continue;
      }
      ++tb.feasible;
      try {
        const Trajectory t = run(spawn_world(s, plans.plans, env), env.map, s.sim, run_options(s, plans.plans));
        if (t.status == RunStatus::completed) ++tb.completed;
        lengths.push_back(t.mean_path_length());
        times.push_back(t.wall_clock_s * 1000.0);
      } catch (const SimulationAborted &e) {
        ++tb.aborted;
        if (first_failure.empty()) first_failure = e.what();
      }
    }
    std::tie(tb.mean_d, tb.var_d) = mean_and_variance(lengths);
    std::tie(tb.mean_t, tb.var_t) = mean_and_variance(times);
    tb.note = first_failure;
    report.tactics.push_back(tb);
  }
  return report;
}

}  // namespace firesquad

// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "firesquad/cli.hpp"
#include "firesquad/errors.hpp"
#include "firesquad/graph_build.hpp"
#include "firesquad/hsfm.hpp"
#include "firesquad/integrator.hpp"
#include "firesquad/planner.hpp"
#include "firesquad/report.hpp"
#include "firesquad/simulation.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace firesquad;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string tactic_flag(Tactic t) { return std::string(to_string(t)); }

const std::vector<Tactic> kTactics{Tactic::free, Tactic::wall_lhr, Tactic::wall_rhr};

// ---------------------------------------------------------------------------
// Shared library runs, one per (map, tactic).

std::map<std::pair<std::string, Tactic>, fixtures::Run> g_runs;

const fixtures::Run &library_run(const std::string &map, Tactic t) {
  const auto key = std::make_pair(map, t);
  auto it = g_runs.find(key);
  if (it == g_runs.end()) {
    Scenario s = fixtures::bundled_scenario(map);
    s.override_tactic(t);
    it = g_runs.emplace(key, fixtures::run_scenario(s)).first;
  }
  return it->second;
}

bool steady(const Trajectory &tr, double t) { return t >= 0.15 * tr.t_end && t <= 0.85 * tr.t_end; }

// Exact distances by scanning a growing window of cells around p.
template <typename Metric>
double nearest_occupied(const GridMap &m, Vec2 p, Metric metric, Vec2 *where = nullptr) {
  const double w = m.resolution();
  const int ci = static_cast<int>(std::floor((p.x - m.origin().x) / w));
  const int cj = static_cast<int>(std::floor((p.y - m.origin().y) / w));
  for (int h = 16;; h *= 2) {
    double best = oracle::kInf;
    for (int j = std::max(0, cj - h); j <= std::min(m.height() - 1, cj + h); ++j)
      for (int i = std::max(0, ci - h); i <= std::min(m.width() - 1, ci + h); ++i) {
        if (!oracle::occupied(m, i, j)) continue;
        const double d = metric(i, j);
        if (d < best) {
          best = d;
          if (where) *where = oracle::center(m, i, j);
        }
      }
    const bool whole = ci - h <= 0 && cj - h <= 0 && ci + h >= m.width() - 1 && cj + h >= m.height() - 1;
    if (best <= (h - 1) * w || whole) return best;
  }
}

double wall_distance(const GridMap &m, Vec2 p) {
  const double w = m.resolution();
  return nearest_occupied(m, p, [&](int i, int j) {
    const double x0 = m.origin().x + i * w, y0 = m.origin().y + j * w;
    const double dx = std::max({x0 - p.x, 0.0, p.x - (x0 + w)});
    const double dy = std::max({y0 - p.y, 0.0, p.y - (y0 + w)});
    return std::hypot(dx, dy);
  });
}

Vec2 nearest_wall_center(const GridMap &m, Vec2 p) {
  Vec2 c{};
  nearest_occupied(m, p, [&](int i, int j) { return distance(oracle::center(m, i, j), p); }, &c);
  return c;
}

bool center_in_obstacle(const GridMap &m, Vec2 p) {
  const double w = m.resolution();
  const int i = static_cast<int>(std::floor((p.x - m.origin().x) / w));
  const int j = static_cast<int>(std::floor((p.y - m.origin().y) / w));
  if (i < 0 || j < 0 || i >= m.width() || j >= m.height()) return true;
  return oracle::occupied(m, i, j);
}

std::size_t penetrations(const GridMap &m, const Trajectory &tr) {
  std::size_t n = 0;
  for (const TrajectoryRow &r : tr.rows) n += center_in_obstacle(m, r.state.p);
  return n;
}

// Stitched planned node positions of a squad, used for turn points.
std::vector<Vec2> plan_polyline(const SquadPlan &plan) {
  std::vector<Vec2> pts;
  for (const RoomSegment &s : plan.segments)
    for (Vec2 q : s.node_positions)
      if (pts.empty() || distance(q, pts.back()) > 1e-9) pts.push_back(q);
  return pts;
}

std::vector<Vec2> turn_points(const SquadPlan &plan, double min_deg) {
  const auto pts = plan_polyline(plan);
  std::vector<Vec2> out;
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    const Vec2 a = pts[k] - pts[k - 1], b = pts[k + 1] - pts[k];
    if (std::abs(std::atan2(cross(a, b), dot(a, b))) > min_deg * std::numbers::pi / 180.0) out.push_back(pts[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------

int cli(const std::vector<std::string> &args, std::string *err_text = nullptr) {
  std::vector<const char *> argv{"firesquad"};
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

fs::path temp_root() {
  static const fs::path root = [] {
    std::mt19937_64 rng(std::random_device{}());
    const fs::path p = fs::temp_directory_path() / ("firesquad_acceptance_" + std::to_string(rng()));
    fs::create_directories(p);
    return p;
  }();
  return root;
}

const std::vector<std::string> kSmallMaps{"corridor", "office", "apartment"};
std::map<std::string, std::string> g_cli_trajectories;  // "map/tactic" -> csv

Outcome determinism() {
  const auto t0 = Clock::now();
  std::vector<std::string> bad;
  int runs = 0;
  for (const auto &map : kSmallMaps) {
    for (Tactic t : kTactics) {
      const std::string tag = map + "_" + tactic_flag(t);
      const std::string scenario = (fixtures::data_dir() / "scenarios" / (map + ".yaml")).string();
      std::string text[2];
      for (int k = 0; k < 2; ++k) {
        const fs::path dir = temp_root() / (tag + "_" + std::to_string(k));
        std::string err;
        const int code = cli({"simulate", "--scenario", scenario, "--tactic", tactic_flag(t), "--out", dir.string()}, &err);
        if (code != kExitOk) {
          bad.push_back(fmt::format("{} exit {} ({})", tag, code, err));
          break;
        }
        for (const char *f : {"trajectory.csv", "plan.json", "summary.json"}) text[k] += fixtures::read_text(dir / f);
        if (k == 0) g_cli_trajectories[tag] = fixtures::read_text(dir / "trajectory.csv");
        ++runs;
      }
      if (text[0] != text[1]) bad.push_back(tag + " differs");
    }
  }
  const double total = seconds_since(t0);
  const bool pass = bad.empty() && runs == 18 && total < 60.0;
  return {pass, fmt::format("{} simulate runs on 3 maps x 3 tactics, byte-identical pairs{}; {:.1f} s total (< 60 s)",
                            runs, bad.empty() ? "" : ", mismatches: " + fmt::format("{}", fmt::join(bad, "; ")), total)};
}

Outcome no_penetration() {
  std::size_t events = 0, rows = 0;
  int scenario_runs = 0;
  for (const auto &map : kSmallMaps) {
    const GridMap m = load_map_file(fixtures::data_dir() / (map + ".yaml"));
    for (Tactic t : kTactics) {
      const auto it = g_cli_trajectories.find(map + "_" + tactic_flag(t));
      if (it == g_cli_trajectories.end()) continue;
      ++scenario_runs;
      std::istringstream in(it->second);
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        std::vector<double> v;
        std::istringstream row(line);
        for (std::string cell; std::getline(row, cell, ',');) v.push_back(std::stod(cell));
        ++rows;
        events += center_in_obstacle(m, {v[3], v[4]});
      }
    }
  }

  // Perturbed starts: every (map, tactic) pair except the slowest one.
  std::vector<std::pair<std::string, Tactic>> combos;
  for (const auto &map : kSmallMaps)
    for (Tactic t : kTactics)
      if (!(map == "apartment" && t == Tactic::wall_rhr)) combos.emplace_back(map, t);
  std::map<std::string, Environment> envs;
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  int variants = 0, rejected = 0, aborted = 0;
  while (variants < 50) {
    const auto &[map, t] = combos[variants % combos.size()];
    Scenario s = fixtures::bundled_scenario(map);
    s.override_tactic(t);
    for (SquadSpec &q : s.squads) q.start.point += Vec2{jitter(rng), jitter(rng)};
    auto env = envs.find(map);
    if (env == envs.end()) env = envs.emplace(map, load_environment(s, s.seed)).first;
    try {
      const PlanSet plans = plan_squads(s, env->second);
      if (!plans.feasible) {
        ++rejected;
        continue;
      }
      const World world = spawn_world(s, plans.plans, env->second);
      const Trajectory tr = run(world, env->second.map, s.sim, run_options(s, plans.plans));
      events += penetrations(env->second.map, tr);
      rows += tr.rows.size();
      ++variants;
    } catch (const InputError &) {
      ++rejected;
    } catch (const SimulationAborted &) {
      ++aborted;
      ++variants;
    }
  }
  const bool pass = events == 0 && aborted == 0 && scenario_runs == 9;
  return {pass, fmt::format("{} scenario runs + {} perturbed starts ({} resampled), {} report states, {} with the "
                            "center in an occupied cell, {} aborted",
                            scenario_runs, variants, rejected, rows, events, aborted)};
}

Outcome wall_distance_band() {
  const double lo = 0.297 - 2.0 * std::sqrt(0.134), hi = 0.297 + 2.0 * std::sqrt(0.134);
  double sum = 0.0;
  std::size_t n = 0;
  bool each = true;
  std::vector<std::string> parts;
  for (const char *map : {"corridor", "office", "apartment", "loop"}) {
    for (Tactic t : {Tactic::wall_lhr, Tactic::wall_rhr}) {
      const fixtures::Run &r = library_run(map, t);
      double s = 0.0;
      std::size_t k = 0;
      for (const TrajectoryRow &row : r.trajectory.rows) {
        if (!steady(r.trajectory, row.t)) continue;
        s += wall_distance(r.env.map, row.state.p);
        ++k;
      }
      const double mean = k ? s / k : oracle::kInf;
      each = each && k > 0 && mean >= lo && mean <= hi;
      sum += s;
      n += k;
      parts.push_back(fmt::format("{} {} {:.3f}", map, to_string(t), mean));
    }
  }
  const double mean = sum / static_cast<double>(n);
  return {each && mean >= lo && mean <= hi,
          fmt::format("pooled mean {:.3f} m over {} steady samples in [{:.3f}, {:.3f}]; per run: {}", mean, n, lo, hi,
                      fmt::join(parts, ", "))};
}

struct StretchFilter {
  std::string map;
  std::function<bool(Vec2)> on_stretch;
};

// Straight stretches at least 5 m long away from both ends of the run.
const std::vector<StretchFilter> kStretches{
    {"corridor", [](Vec2 p) { return p.x >= 4.0 && p.x <= 10.0; }},
    {"loop", [](Vec2 p) { return (p.x >= 24.0 && p.x <= 36.0 && p.y < 1.9) || (p.x >= 6.0 && p.x <= 34.0 && p.y > 18.1); }},
};

Outcome speed_calibration() {
  bool pass = true;
  std::vector<std::string> parts;
  for (const auto &st : kStretches) {
    for (Tactic t : kTactics) {
      const fixtures::Run &r = library_run(st.map, t);
      const double v_des = t == Tactic::free ? r.scenario.sim.v_des_free : r.scenario.sim.v_des_restricted;
      double s = 0.0;
      std::size_t k = 0;
      for (const TrajectoryRow &row : r.trajectory.rows) {
        if (!st.on_stretch(row.state.p)) continue;
        s += norm(row.state.velocity());
        ++k;
      }
      const double mean = k ? s / k : 0.0;
      const bool ok = k > 0 && std::abs(mean - v_des) <= 0.1 * v_des;
      pass = pass && ok;
      parts.push_back(fmt::format("{} {} {:.3f}/{:.3f} m/s ({:+.1f} %, {} samples)", st.map, to_string(t), mean, v_des,
                                  100.0 * (mean / v_des - 1.0), k));
    }
  }
  return {pass, fmt::format("{}", fmt::join(parts, ", "))};
}

Outcome spacing() {
  const double free_lo = 0.634 - 2.0 * std::sqrt(0.301), free_hi = 0.634 + 2.0 * std::sqrt(0.301);
  const double res_lo = 0.275 - 2.0 * std::sqrt(0.073), res_hi = 0.275 + 2.0 * std::sqrt(0.073);
  bool pass = true;
  std::vector<std::string> parts;
  for (const char *map : {"corridor", "loop"}) {
    for (Tactic t : kTactics) {
      const fixtures::Run &r = library_run(map, t);
      std::map<double, std::vector<Vec2>> by_t;
      for (const TrajectoryRow &row : r.trajectory.rows)
        if (steady(r.trajectory, row.t)) by_t[row.t].push_back(row.state.p);
      double s = 0.0;
      std::size_t k = 0;
      for (const auto &[t_, ps] : by_t) {
        for (std::size_t a = 0; a < ps.size(); ++a) {
          double best = oracle::kInf;
          for (std::size_t b = 0; b < ps.size(); ++b)
            if (a != b) best = std::min(best, distance(ps[a], ps[b]));
          if (std::isfinite(best)) {
            s += best;
            ++k;
          }
        }
      }
      const double mean = k ? s / k : oracle::kInf;
      const bool free = t == Tactic::free;
      const double lo = free ? free_lo : res_lo, hi = free ? free_hi : res_hi;
      const bool ok = k > 0 && mean >= lo && mean <= hi;
      pass = pass && ok;
      parts.push_back(fmt::format("{} {} {:.3f} m in [{:.3f}, {:.3f}]", map, to_string(t), mean, lo, hi));
    }
  }
  return {pass, fmt::format("{}", fmt::join(parts, ", "))};
}

// Random sub-graphs: induced subsets of bundled room graphs and random
// geometric graphs with random permits.
RoomSubGraph induced(const RoomSubGraph &g, std::mt19937_64 &rng) {
  std::vector<NodeId> ids(g.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  const std::size_t keep = std::min<std::size_t>(g.size(), std::uniform_int_distribution<std::size_t>(20, 500)(rng));
  ids.resize(keep);
  std::sort(ids.begin(), ids.end());
  std::vector<std::int64_t> remap(g.size(), -1);
  RoomSubGraph h;
  h.room = g.room;
  h.wall_band = g.wall_band;
  for (NodeId v : ids) {
    remap[v] = static_cast<std::int64_t>(h.nodes.size());
    PlanNode n = g.nodes[v];
    n.id = static_cast<NodeId>(h.nodes.size());
    h.nodes.push_back(n);
  }
  for (const PlanEdge &e : g.edges)
    if (remap[e.from] >= 0 && remap[e.to] >= 0)
      h.edges.push_back({static_cast<NodeId>(remap[e.from]), static_cast<NodeId>(remap[e.to]), e.length, e.permits});
  h.rebuild_adjacency();
  return h;
}

RoomSubGraph random_geometric(std::mt19937_64 &rng) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(10, 500)(rng);
  const double side = std::sqrt(static_cast<double>(n)) * 0.8;
  std::uniform_real_distribution<double> u(0.0, side);
  std::uniform_int_distribution<int> bits(0, 7);
  RoomSubGraph g;
  g.room = "synthetic";
  for (std::size_t k = 0; k < n; ++k) {
    PlanNode p;
    p.id = static_cast<NodeId>(k);
    p.position = {u(rng), u(rng)};
    g.nodes.push_back(p);
  }
  auto permits = [&] {
    Permits p;
    const int b = bits(rng);
    for (Tactic t : kTactics)
      if (b & (1 << static_cast<int>(t))) p = p.with(t);
    return p;
  };
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) {
      const Vec2 pa = g.nodes[a].position, pb = g.nodes[b].position;
      if (distance(pa, pb) > 1.5) continue;
      g.edges.push_back({a, b, edge_length(pa, pb), permits()});
      g.edges.push_back({b, a, edge_length(pa, pb), permits()});
    }
  g.rebuild_adjacency();
  return g;
}

Outcome planner_oracle() {
  std::vector<RoomSubGraph> pool;
  for (const char *map : {"corridor", "office", "apartment", "loop"}) {
    const fixtures::Run &r = library_run(map, Tactic::free);
    for (std::size_t k = 0; k < r.env.rooms.rooms().size(); ++k) pool.push_back(*r.env.rooms.sub_graph(k));
  }
  std::mt19937_64 rng(6);
  int graphs = 0, queries = 0, feasible = 0, mismatches = 0;
  std::size_t largest = 0;
  for (int k = 0; k < 100; ++k) {
    const RoomSubGraph g = k % 2 == 0 ? induced(pool[rng() % pool.size()], rng) : random_geometric(rng);
    largest = std::max(largest, g.size());
    if (g.size() > 500 || g.size() == 0) {
      ++mismatches;
      continue;
    }
    ++graphs;
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.size() - 1));
    for (int q = 0; q < 5; ++q) {
      const Tactic t = kTactics[rng() % 3];
      const NodeId from = pick(rng), to = pick(rng);
      const auto want = oracle::dijkstra(g, from, t);
      const PathResult got = plan_room(g, from, to, t);
      ++queries;
      if (got.feasible != std::isfinite(want[to])) {
        ++mismatches;
        continue;
      }
      if (!got.feasible) continue;
      ++feasible;
      double walked = 0.0;
      bool permitted = got.nodes.front() == from && got.nodes.back() == to;
      for (std::size_t s = 1; s < got.nodes.size() && permitted; ++s) {
        const PlanEdge *e = g.find_edge(got.nodes[s - 1], got.nodes[s]);
        permitted = e && e->permits.allows(t);
        if (e) walked += e->length;
      }
      if (got.cost != want[to] || walked != got.cost || !permitted) ++mismatches;
    }
  }
  return {graphs == 100 && mismatches == 0,
          fmt::format("{} sub-graphs (largest {} nodes), {} queries ({} feasible), {} cost mismatches", graphs, largest,
                      queries, feasible, mismatches)};
}

Outcome visibility_coverage() {
  std::size_t cells = 0, unseen = 0, outside = 0;
  std::vector<std::string> parts;
  for (const auto &map : kSmallMaps) {
    const fixtures::Run &r = library_run(map, Tactic::free);
    const GridMap &m = r.env.map;
    std::vector<std::vector<Vec2>> guards(r.env.rooms.rooms().size());
    std::vector<Vec2> all;
    for (std::size_t k = 0; k < guards.size(); ++k)
      for (const PlanNode &n : r.env.rooms.sub_graph(k)->nodes)
        if (n.kind == NodeKind::guard) {
          guards[k].push_back(n.position);
          all.push_back(n.position);
        }
    std::vector<char> in_room(m.cell_count(), 0);
    std::size_t map_unseen = 0;
    for (std::size_t k = 0; k < guards.size(); ++k) {
      for (const Cell &c : r.env.rooms.rooms()[k].cells) {
        in_room[m.index(c)] = 1;
        ++cells;
        const Vec2 p = m.cell_center(c);
        auto sees = [&](Vec2 g) { return oracle::line_of_sight(m, g, p); };
        if (std::any_of(guards[k].begin(), guards[k].end(), sees) || std::any_of(all.begin(), all.end(), sees)) continue;
        ++map_unseen;
      }
    }
    // Free cells no room polygon claims would be missed above; count them.
    std::size_t map_outside = 0;
    for (int j = 0; j < m.height(); ++j)
      for (int i = 0; i < m.width(); ++i)
        if (!oracle::occupied(m, i, j) && !in_room[m.index(Cell{i, j})]) ++map_outside;
    unseen += map_unseen;
    outside += map_outside;
    parts.push_back(fmt::format("{}: {} guards, {} unseen, {} free cells outside rooms", map, all.size(), map_unseen,
                                map_outside));
  }
  return {unseen == 0 && outside == 0,
          fmt::format("{} free cells on corridor/office/apartment; {}", cells, fmt::join(parts, "; "))};
}

Outcome single_entry_free() {
  std::mt19937_64 rng(808);
  int rooms = 0, covered = 0;
  std::size_t nodes = 0;
  for (int k = 0; k < 20; ++k) {
    const fixtures::Building b = fixtures::random_single_entry_room(rng);
    const Environment env = make_environment(b.map, b.rooms, GraphParams{});
    const RoomSubGraph &g = *env.rooms.sub_graph(0);
    ++rooms;
    if (g.entry_nodes.size() != 1) continue;
    const PathResult p = plan_room_single_entry_free(g, g.entry_nodes[0], env.map);
    if (!p.feasible) continue;
    const std::set<NodeId> seen(p.nodes.begin(), p.nodes.end());
    nodes += g.visibility_nodes.size();
    covered += std::all_of(g.visibility_nodes.begin(), g.visibility_nodes.end(),
                           [&](NodeId v) { return seen.count(v) == 1; });
  }
  return {rooms == 20 && covered == 20,
          fmt::format("{}/{} random single-entry rooms fully covered ({} visibility nodes in total)", covered, rooms,
                      nodes)};
}

Outcome chirality() {
  bool pass = true;
  std::vector<std::string> parts;
  for (const char *map : {"corridor", "loop"}) {
    for (Tactic t : {Tactic::wall_lhr, Tactic::wall_rhr}) {
      const fixtures::Run &r = library_run(map, t);
      const double w = r.env.map.resolution();
      const auto turns = turn_points(r.plans[0], 30.0);
      const double v_min = 0.5 * r.scenario.sim.v_des_restricted;
      std::size_t n = 0, good = 0;
      for (const TrajectoryRow &row : r.trajectory.rows) {
        if (!steady(r.trajectory, row.t)) continue;
        const Vec2 p = row.state.p, v = row.state.velocity();
        if (norm(v) < v_min) continue;
        if (std::any_of(turns.begin(), turns.end(), [&](Vec2 q) { return distance(p, q) < 2.0; })) continue;
        const double c = cross(normalized(v), nearest_wall_center(r.env.map, p) - p);
        good += t == Tactic::wall_rhr ? c <= 0.5 * w : c >= -0.5 * w;
        ++n;
      }
      const double frac = n ? static_cast<double>(good) / n : 0.0;
      pass = pass && n > 0 && frac >= 0.9;
      parts.push_back(fmt::format("{} {} {:.1f} % of {}", map, to_string(t), 100.0 * frac, n));
    }
  }
  return {pass, "nearest wall on the hand side: " + fmt::format("{}", fmt::join(parts, ", "))};
}

Outcome integrator() {
  const IntegratorReport rep = integrator_self_test();
  std::vector<std::string> parts;
  for (const auto &c : rep.checks) parts.push_back(fmt::format("{} {:.2e}/{:.0e}", c.name, c.max_error, c.tolerance));

  // Independent runs with the bare stepper.
  Dopri5Stepper st;
  OdeState x{1.0};
  const double dt = 0.06;
  const int n = static_cast<int>(std::round(5.0 / dt));
  const double h = 5.0 / n;
  double decay = 0.0;
  for (int k = 0; k < n; ++k) {
    st.step([](const OdeState &y, OdeState &dy, double) { dy[0] = -y[0]; }, x, k * h, h);
    decay = std::max(decay, std::abs(x[0] - std::exp(-(k + 1) * h)));
  }
  st.reset();
  OdeState y{1.0, 0.0};
  const int m = static_cast<int>(std::ceil(2.0 * std::numbers::pi / dt));
  const double hp = 2.0 * std::numbers::pi / m;
  for (int k = 0; k < m; ++k)
    st.step([](const OdeState &s, OdeState &ds, double) { ds[0] = s[1]; ds[1] = -s[0]; }, y, k * hp, hp);
  const double osc = std::hypot(y[0] - 1.0, y[1]);
  return {rep.passed() && decay <= 1e-6 && osc <= 1e-5,
          fmt::format("self-test [{}]; direct: decay {:.2e} (<= 1e-6), oscillator period {:.2e} (<= 1e-5)",
                      fmt::join(parts, ", "), decay, osc)};
}

Outcome performance() {
  const fixtures::Run &a = library_run("corridor", Tactic::free);
  const fixtures::Run &b = library_run("loop", Tactic::wall_lhr);
  const double ta = a.trajectory.wall_clock_s * 1000.0, tb = b.trajectory.wall_clock_s * 1000.0;
  const bool done = a.trajectory.status == RunStatus::completed && b.trajectory.status == RunStatus::completed;
  return {done && ta < 500.0 && tb < 5000.0,
          fmt::format("corridor FREE plan {:.1f} m simulated in {:.1f} ms (< 500); loop WALL_LHR plan {:.1f} m in "
                      "{:.1f} ms (< 5000); 3 agents each",
                      a.plans[0].length(), ta, b.plans[0].length(), tb)};
}

Outcome force_identities() {
  auto rel = [](double got, double want) { return oracle::rel_err(got, want); };
  double worst = 0.0;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> f(-400, 400), ang(-std::numbers::pi, std::numbers::pi), v(-2, 2);
  const ControlParams cp;
  for (int k = 0; k < 500; ++k) {
    AgentState a;
    a.theta = ang(rng);
    a.v = {v(rng), v(rng)};
    a.omega = v(rng);
    const GoalForce g{{f(rng), f(rng)}, ang(rng)};
    const Vec2 fa{f(rng), f(rng)}, fb{f(rng), f(rng)};
    const ForceBreakdown b = make_breakdown(g, fa, fb);
    const Vec2 tot{g.force.x + fa.x + fb.x, g.force.y + fa.y + fb.y};
    worst = std::max({worst, std::abs(b.f_total.x - tot.x) / std::max(1.0, std::abs(tot.x)),
                      std::abs(b.f_total.y - tot.y) / std::max(1.0, std::abs(tot.y))});
    const TorqueGains tg = torque_gains(a.I, norm(g.force), cp);
    const ControlInputs u = control_inputs(a, b, cp, tg);
    const double c = std::cos(a.theta), s = std::sin(a.theta);
    const double u_f = tot.x * c + tot.y * s;
    const double u_o = cp.c_o * (-(fa.x + fb.x) * s + (fa.y + fb.y) * c) - cp.c_des * a.v.y;
    double err = std::remainder(a.theta - g.phase, 2.0 * std::numbers::pi);
    if (err <= -std::numbers::pi) err += 2.0 * std::numbers::pi;
    const double lambda = cp.k_lambda * norm(g.force);
    const double u_t = -a.I * lambda * err - a.I * (1.0 + cp.alpha) * std::sqrt(lambda / cp.alpha) * a.omega;
    worst = std::max({worst, std::abs(u.u_f - u_f) / std::max(1.0, std::abs(u_f)),
                      std::abs(u.u_o - u_o) / std::max(1.0, std::abs(u_o)),
                      std::abs(u.u_theta - u_t) / std::max(1.0, std::abs(u_t))});
  }

  const ContactParams contact;
  const Vec2 n = normalized(Vec2{3.0, 4.0});
  auto sample = [&](double d) {
    ContactSample s;
    s.d = d;
    s.n = n;
    s.t = perp(n);
    return s;
  };
  AgentState rest;
  AgentState sliding;
  sliding.v = {0.0, 0.4};
  const Vec2 far = border_force(sample(0.5), rest, contact);
  const Vec2 touch = border_force(sample(0.2), rest, contact);
  const Vec2 slide = border_force(sample(0.2), sliding, contact) - touch;
  const double far_want = 11.0 * std::exp(-0.25 / 0.2), touch_want = 11.0 * std::exp(0.05 / 0.2) + 0.5 * 1200.0;
  const double e1 = std::max(rel(dot(far, n), far_want), std::abs(dot(far, perp(n))) / far_want);
  const double e2 = std::max(rel(dot(touch, n), touch_want), std::abs(dot(touch, perp(n))) / touch_want);
  const double e3 = std::max(rel(dot(slide, perp(n)), 240.0), std::abs(dot(slide, n)) / 240.0);
  const bool rounded = std::abs(far_want - 3.152) < 5e-4 && std::abs(touch_want - 614.12) < 5e-3;
  worst = std::max({worst, e1, e2, e3});
  return {worst <= 1e-9 && rounded,
          fmt::format("sum identity and control inputs on 500 random states, border examples {:.4f} N normal, "
                      "{:.2f} N normal, {:.1f} N tangential; worst relative error {:.1e} (<= 1e-9)",
                      dot(far, n), dot(touch, n), dot(slide, perp(n)), worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"determinism", determinism},
      {"no penetration", no_penetration},
      {"wall-search border distance", wall_distance_band},
      {"velocity calibration", speed_calibration},
      {"intra-squad spacing", spacing},
      {"planner oracle", planner_oracle},
      {"visibility coverage", visibility_coverage},
      {"single-entry FREE coverage", single_entry_free},
      {"chirality", chirality},
      {"integrator", integrator},
      {"performance", performance},
      {"force identities", force_identities},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << k + 1 << " " << criteria[k].first << ": " << o.detail << std::endl;
  }
  std::error_code ec;
  fs::remove_all(temp_root(), ec);
  return failed == 0 ? 0 : 1;
}

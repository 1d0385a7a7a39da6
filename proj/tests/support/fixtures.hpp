#pragma once

// Map builders and scenario helpers shared by the unit and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "firesquad/grid_map.hpp"
#include "firesquad/room_graph.hpp"
#include "firesquad/scenario.hpp"
#include "firesquad/simulation.hpp"

namespace fixtures {

using namespace firesquad;

inline std::filesystem::path data_dir() { return FIRESQUAD_DATA_DIR; }

inline std::string read_text(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// rows[0] is the top row of the map (largest j); '#' marks occupied cells.
inline GridMap ascii_map(const std::vector<std::string> &rows, double w = 1.0, Vec2 origin = {}) {
  const int h = static_cast<int>(rows.size());
  const int wd = static_cast<int>(rows.front().size());
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(wd) * h, 0);
  for (int r = 0; r < h; ++r)
    for (int i = 0; i < wd; ++i) occ[static_cast<std::size_t>(h - 1 - r) * wd + i] = rows[r][i] == '#';
  return GridMap(wd, h, w, origin, std::move(occ));
}

// Rectangle of free cells, nx by ny, surrounded by a one-cell wall.
inline std::vector<std::uint8_t> walled_box(int nx, int ny) {
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(nx) * ny, 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) occ[static_cast<std::size_t>(j) * nx + i] = 1;
  return occ;
}

inline void fill_rect(std::vector<std::uint8_t> &occ, int nx, int i0, int j0, int i1, int j1, std::uint8_t v = 1) {
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) occ[static_cast<std::size_t>(j) * nx + i] = v;
}

struct Building {
  GridMap map;
  RoomAnnotation rooms;
};

// A single walled room at 0.1 m per cell whose only doorway, in the bottom
// wall, leads outside.
inline Building square_room(double side = 4.0, double door_x = -1.0) {
  const double w = 0.1;
  const int n = static_cast<int>(std::lround(side / w)) + 2;
  auto occ = walled_box(n, n);
  const double x0 = door_x < 0 ? 0.5 * (n * w) - 0.45 : door_x;
  const int i0 = static_cast<int>(std::floor(x0 / w + 1e-9)), i1 = static_cast<int>(std::floor((x0 + 0.9) / w - 1e-9));
  fill_rect(occ, n, i0, 0, i1, 0, 0);
  Building b{GridMap(n, n, w, {}, std::move(occ)), {}};
  const double hi = n * w - w;
  b.rooms.rooms.push_back({"room", {{w, w}, {hi, w}, {hi, hi}, {w, hi}}});
  b.rooms.doorways.push_back({"door", "room", std::string(kExterior), {x0, w + 0.05}, {x0 + 0.9, w + 0.05}});
  return b;
}

// Every free cell of the room reachable from the cell at p (4-connected).
inline bool connected_free_space(const GridMap &m, Vec2 p) {
  const auto start = m.cell_at(p);
  if (!start || m.occupied(*start)) return false;
  std::vector<char> seen(m.cell_count(), 0);
  std::vector<Cell> stack{*start};
  seen[m.index(*start)] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    const Cell nb[4] = {{c.i + 1, c.j}, {c.i - 1, c.j}, {c.i, c.j + 1}, {c.i, c.j - 1}};
    for (const Cell &q : nb) {
      if (!m.in_bounds(q) || m.occupied(q) || seen[m.index(q)]) continue;
      seen[m.index(q)] = 1;
      ++reached;
      stack.push_back(q);
    }
  }
  return reached == m.cell_count() - m.occupied_count();
}

// Randomized single-entry room: a walled rectangle with a doorway in the bottom
// wall and a few pillars or partition stubs, resampled until free space is one
// connected region.
inline Building random_single_entry_room(std::mt19937_64 &rng) {
  const double w = 0.1;
  std::uniform_int_distribution<int> size(40, 80);
  for (;;) {
    const int nx = size(rng) + 2, ny = size(rng) + 2;
    auto occ = walled_box(nx, ny);
    std::uniform_int_distribution<int> door_at(2, nx - 12);
    const int d0 = door_at(rng);
    fill_rect(occ, nx, d0, 0, d0 + 8, 0, 0);
    std::uniform_int_distribution<int> kind(0, 2), count(1, 3);
    const int k = kind(rng);
    if (k == 0) {
      // Pillars away from the walls.
      const int n = count(rng);
      for (int p = 0; p < n; ++p) {
        std::uniform_int_distribution<int> side(3, 8);
        const int sx = side(rng), sy = side(rng);
        std::uniform_int_distribution<int> px(12, nx - 13 - sx), py(14, ny - 13 - sy);
        const int i = px(rng), j = py(rng);
        fill_rect(occ, nx, i, j, i + sx, j + sy);
      }
    } else if (k == 1) {
      // Partition from the left or right wall, leaving a wide passage.
      std::uniform_int_distribution<int> row(16, ny - 16);
      const int j = row(rng);
      const int len = static_cast<int>(0.55 * nx);
      if (rng() % 2) fill_rect(occ, nx, 1, j, len, j + 1);
      else fill_rect(occ, nx, nx - 1 - len, j, nx - 2, j + 1);
    } else {
      // Partition from the top wall.
      std::uniform_int_distribution<int> col(14, nx - 16);
      const int i = col(rng);
      fill_rect(occ, nx, i, ny - 1 - static_cast<int>(0.5 * ny), i + 1, ny - 2);
    }
    GridMap map(nx, ny, w, {}, std::move(occ));
    if (!connected_free_space(map, {(d0 + 4.5) * w, 0.15})) continue;
    Building b{std::move(map), {}};
    const double hx = (nx - 1) * w, hy = (ny - 1) * w;
    b.rooms.rooms.push_back({"room", {{w, w}, {hx, w}, {hx, hy}, {w, hy}}});
    b.rooms.doorways.push_back({"door", "room", std::string(kExterior), {d0 * w + 0.05, w + 0.05},
                                {(d0 + 9) * w - 0.05, w + 0.05}});
    return b;
  }
}

inline Scenario bundled_scenario(const std::string &name) {
  return load_scenario_file(data_dir() / "scenarios" / (name + ".yaml"));
}

struct Run {
  Scenario scenario;
  Environment env;
  std::vector<SquadPlan> plans;
  Trajectory trajectory;
};

// Plans and simulates a scenario; throws when the plan is infeasible.
inline Run run_scenario(Scenario s) {
  Environment env = load_environment(s, s.seed);
  PlanSet plans = plan_squads(s, env);
  if (!plans.feasible) throw std::runtime_error("infeasible: " + plans.reason);
  Trajectory t = run(spawn_world(s, plans.plans, env), env.map, s.sim, run_options(s, plans.plans));
  return Run{std::move(s), std::move(env), std::move(plans.plans), std::move(t)};
}

}  // namespace fixtures

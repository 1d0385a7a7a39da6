#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>

#include "firesquad/graph_build.hpp"

namespace firesquad {

namespace {

// Neighbour order around p, counter-clockwise starting east.
constexpr std::array<std::array<int, 2>, 8> kRing{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

class Mask {
 public:
  Mask(int w, int h) : w_(w), h_(h), bits_(static_cast<std::size_t>(w) * h, 0) {}
  bool get(int i, int j) const { return i >= 0 && j >= 0 && i < w_ && j < h_ && bits_[idx(i, j)]; }
  void set(int i, int j, bool v) { bits_[idx(i, j)] = v; }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * w_ + i; }
  int w_, h_;
  std::vector<std::uint8_t> bits_;
};

// (8,4) simple point: removing p keeps one 8-component of foreground in its
// neighbourhood and one 4-component of background touching p.
bool is_simple_point(const Mask &fg, int i, int j) {
  std::array<bool, 8> n{};
  for (int k = 0; k < 8; ++k) n[k] = fg.get(i + kRing[k][0], j + kRing[k][1]);

  // 8-components of foreground on the ring.
  int fg_components = 0;
  std::array<bool, 8> seen{};
  for (int k = 0; k < 8; ++k) {
    if (!n[k] || seen[k]) continue;
    ++fg_components;
    std::vector<int> stack{k};
    seen[k] = true;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int m = 0; m < 8; ++m) {
        if (!n[m] || seen[m]) continue;
        const int di = std::abs(kRing[c][0] - kRing[m][0]);
        const int dj = std::abs(kRing[c][1] - kRing[m][1]);
        if (di <= 1 && dj <= 1) {
          seen[m] = true;
          stack.push_back(m);
        }
      }
    }
  }
  if (fg_components != 1) return false;

  // 4-components of background on the ring that are 4-adjacent to p.
  int bg_components = 0;
  seen.fill(false);
  for (int k = 0; k < 8; k += 2) {
    if (n[k] || seen[k]) continue;
    ++bg_components;
    std::vector<int> stack{k};
    seen[k] = true;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int m = 0; m < 8; ++m) {
        if (n[m] || seen[m]) continue;
        const int di = std::abs(kRing[c][0] - kRing[m][0]);
        const int dj = std::abs(kRing[c][1] - kRing[m][1]);
        if (di + dj == 1) {
          seen[m] = true;
          stack.push_back(m);
        }
      }
    }
  }
  return bg_components == 1;
}

int foreground_neighbours(const Mask &fg, int i, int j) {
  int count = 0;
  for (const auto &d : kRing) count += fg.get(i + d[0], j + d[1]);
  return count;
}

}  // namespace

MedialAxis build_medial_axis(const Room &room, const GridMap &map, const DistanceField &field) {
  MedialAxis axis;
  if (room.cells.empty() || map.occupied_count() == 0) return axis;

  const int w = map.width(), h = map.height();
  Mask in_room(w, h);
  for (const Cell &c : room.cells) in_room.set(c.i, c.j, true);

  auto feature = [&](Cell c) { return map.cell_of_index(static_cast<std::size_t>(field.nearest_index(c))); };
  auto feature_gap = [&](Cell a, Cell b) {
    const Cell fa = feature(a), fb = feature(b);
    return std::hypot(fa.i - fb.i, fa.j - fb.j);
  };

  Mask skeleton(w, h);
  std::vector<Cell> members;
  for (const Cell &p : room.cells) {
    bool candidate = false;
    // One-cell-wide passages: obstacles on opposite sides.
    auto blocked = [&](int di, int dj) {
      const Cell q{p.i + di, p.j + dj};
      return !map.in_bounds(q) || map.occupied(q);
    };
    if ((blocked(1, 0) && blocked(-1, 0)) || (blocked(0, 1) && blocked(0, -1))) candidate = true;
    for (const auto &d : kRing) {
      if (candidate) break;
      const Cell q{p.i + d[0], p.j + d[1]};
      if (!map.in_bounds(q) || map.occupied(q)) continue;
      if (feature_gap(p, q) > 2.0 && field.at(p) >= field.at(q)) candidate = true;
    }
    if (candidate) {
      skeleton.set(p.i, p.j, true);
      members.push_back(p);
    }
  }

  // Thinning in order of increasing clearance; among equal clearance the cells
  // with more higher-valued neighbours (off the ridge) go first.
  auto higher_neighbours = [&](Cell p) {
    int count = 0;
    for (const auto &d : kRing) {
      const Cell q{p.i + d[0], p.j + d[1]};
      if (map.in_bounds(q) && !map.occupied(q) && field.at(q) > field.at(p)) ++count;
    }
    return count;
  };
  std::vector<std::tuple<double, int, std::size_t>> order;
  order.reserve(members.size());
  for (const Cell &p : members) order.emplace_back(field.at(p), -higher_neighbours(p), map.index(p));
  std::sort(order.begin(), order.end());

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &[dist, rank, idx] : order) {
      const Cell p = map.cell_of_index(idx);
      if (!skeleton.get(p.i, p.j)) continue;
      if (foreground_neighbours(skeleton, p.i, p.j) <= 1) continue;
      if (!is_simple_point(skeleton, p.i, p.j)) continue;
      skeleton.set(p.i, p.j, false);
      changed = true;
    }
  }

  // Keep only local maxima with respect to non-skeleton room neighbours.
  changed = true;
  while (changed) {
    changed = false;
    for (const auto &[dist, rank, idx] : order) {
      const Cell p = map.cell_of_index(idx);
      if (!skeleton.get(p.i, p.j)) continue;
      for (const auto &d : kRing) {
        const Cell q{p.i + d[0], p.j + d[1]};
        if (!in_room.get(q.i, q.j) || skeleton.get(q.i, q.j)) continue;
        if (field.at(q) > field.at(p)) {
          skeleton.set(p.i, p.j, false);
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<std::int64_t> slot(map.cell_count(), -1);
  for (const Cell &p : room.cells) {
    if (!skeleton.get(p.i, p.j)) continue;
    slot[map.index(p)] = static_cast<std::int64_t>(axis.cells.size());
    axis.cells.push_back(p);
  }
  for (std::uint32_t a = 0; a < axis.cells.size(); ++a) {
    const Cell p = axis.cells[a];
    for (const auto &d : kRing) {
      const Cell q{p.i + d[0], p.j + d[1]};
      if (!map.in_bounds(q)) continue;
      const std::int64_t b = slot[map.index(q)];
      if (b > static_cast<std::int64_t>(a)) axis.edges.emplace_back(a, static_cast<std::uint32_t>(b));
    }
  }
  return axis;
}

}  // namespace firesquad

#include "firesquad/waypoints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace firesquad {

namespace {

constexpr double kStripWidth = 0.8;  // fraction of the body radius kept clear of walls when steering

}  // namespace

const char *to_string(Vision v) { return v == Vision::free ? "free" : "restricted"; }

std::optional<Waypoint> WaypointTracker::front() const {
  if (remaining.empty()) return std::nullopt;
  return remaining.front();
}

bool waypoint_visited(const Waypoint &w, const AgentState &a, Vision vision, const WaypointParams &params,
                      const GridMap *map) {
  const Vec2 rel = w.position - a.p;
  const double dist = norm(rel);
  if (w.essential) return dist <= params.essential_circle_range;
  if (dist <= params.circle_range) return true;
  const double range = vision == Vision::free ? params.cone_range_free : params.cone_range_restricted;
  if (dist > range) return false;
  if (std::abs(wrap_angle(angle_of(rel) - a.theta)) > 0.5 * params.cone_angle) return false;
  return !params.cone_needs_line_of_sight || map == nullptr || line_of_sight(*map, a.p, w.position);
}

std::size_t update_waypoints(WaypointTracker &tracker, const AgentState &a, Vision vision, const GridMap *map) {
  std::size_t removed = 0;
  while (!tracker.remaining.empty() &&
         waypoint_visited(tracker.remaining.front(), a, vision, tracker.params, map)) {
    tracker.last_removed = tracker.remaining.front();
    tracker.remaining.pop_front();
    ++removed;
  }
  return removed;
}

bool clear_strip(const GridMap &map, Vec2 a, Vec2 b, double half_width) {
  if (!line_of_sight(map, a, b)) return false;
  if (half_width <= 0.0 || distance(a, b) < 1e-12) return true;
  const Vec2 side = half_width * perp(normalized(b - a));
  return line_of_sight(map, a + side, b + side) && line_of_sight(map, a - side, b - side);
}

GeodesicGuide::GeodesicGuide(const GridMap &map, double clearance, double tight_cost)
    : map_(&map), step_weight_(map.cell_count(), 1.0) {
  const DistanceField df = distance_transform(map);
  for (std::size_t i = 0; i < step_weight_.size(); ++i) {
    if (df.values()[i] < clearance) step_weight_[i] = tight_cost;
  }
}

const std::vector<double> &GeodesicGuide::field(std::size_t goal) {
  auto it = fields_.find(goal);
  if (it != fields_.end()) return it->second;
  const GridMap &m = *map_;
  std::vector<double> dist(m.cell_count(), std::numeric_limits<double>::infinity());
  using Entry = std::tuple<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[goal] = 0.0;
  open.emplace(0.0, goal);
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    const Cell c = m.cell_of_index(u);
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const Cell nb{c.i + di, c.j + dj};
        if (!m.in_bounds(nb) || m.occupied(nb)) continue;
        if (di != 0 && dj != 0 && (m.occupied(Cell{c.i + di, c.j}) || m.occupied(Cell{c.i, c.j + dj}))) continue;
        const std::size_t v = m.index(nb);
        const double cand = d + (di != 0 && dj != 0 ? std::numbers::sqrt2 : 1.0) * step_weight_[v];
        if (cand < dist[v]) {
          dist[v] = cand;
          open.emplace(cand, v);
        }
      }
    }
  }
  return fields_.emplace(goal, std::move(dist)).first->second;
}

std::optional<Vec2> GeodesicGuide::via(Vec2 p, Vec2 goal, double radius, double half_width) {
  const GridMap &m = *map_;
  const auto gc = m.cell_at(goal);
  const auto pc = m.cell_at(p);
  if (!gc || !pc || m.occupied(*gc)) return std::nullopt;
  const std::vector<double> &dist = field(m.index(*gc));
  const int k = static_cast<int>(std::ceil(radius / m.resolution()));
  std::vector<std::pair<double, std::size_t>> candidates;
  for (int dj = -k; dj <= k; ++dj) {
    for (int di = -k; di <= k; ++di) {
      const Cell c{pc->i + di, pc->j + dj};
      if (!m.in_bounds(c) || m.occupied(c)) continue;
      const std::size_t idx = m.index(c);
      if (!std::isfinite(dist[idx]) || distance(m.cell_center(c), p) > radius) continue;
      candidates.emplace_back(dist[idx], idx);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto &[d, idx] : candidates) {
    const Vec2 c = m.cell_center(m.cell_of_index(idx));
    if (clear_strip(m, p, c, half_width)) return c;
  }
  return std::nullopt;
}

std::optional<Vec2> steering_target(const WaypointTracker &tracker, const AgentState &a, const GridMap *map,
                                    GeodesicGuide *guide) {
  if (tracker.remaining.empty()) return std::nullopt;
  const Vec2 front = tracker.remaining.front().position;
  if (map == nullptr || line_of_sight(*map, a.p, front)) {
    if (guide == nullptr || clear_strip(*map, a.p, front, kStripWidth * a.r)) return front;
  }
  if (guide != nullptr) {
    if (const auto v = guide->via(a.p, front, 1.5, kStripWidth * a.r)) return v;
  }
  if (line_of_sight(*map, a.p, front)) return front;
  return tracker.last_removed ? tracker.last_removed->position : front;
}

}  // namespace firesquad

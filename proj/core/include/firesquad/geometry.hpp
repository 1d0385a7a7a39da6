#pragma once

// Small 2-D vector toolkit shared by every module. World coordinates are
// meters in a right-handed frame (x east, y north, angles counter-clockwise).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace firesquad {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
// z-component of the 3-D cross product; > 0 when b is counter-clockwise of a.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double squared_norm(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// Unit vector, or the zero vector when |a| is below eps.
inline Vec2 normalized(Vec2 a, double eps = 1e-12) {
  const double n = norm(a);
  return n < eps ? Vec2{} : a / n;
}

// Counter-clockwise perpendicular.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

inline Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }

// Wraps into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  if (r > std::numbers::pi) r -= two_pi;
  return r;
}

// Column-major 2x2 matrix: col0 = (m00, m10), col1 = (m01, m11).
struct Mat2 {
  double m00 = 1.0, m01 = 0.0;
  double m10 = 0.0, m11 = 1.0;

  constexpr Vec2 col0() const { return {m00, m10}; }
  constexpr Vec2 col1() const { return {m01, m11}; }
  constexpr Vec2 operator*(Vec2 v) const { return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y}; }
};

struct Box2 {
  Vec2 lo{};
  Vec2 hi{};

  constexpr double width() const { return hi.x - lo.x; }
  constexpr double height() const { return hi.y - lo.y; }
  constexpr double area() const { return width() * height(); }
  constexpr bool contains(Vec2 p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

struct Polygon {
  std::vector<Vec2> vertices;

  Box2 bounds() const {
    if (vertices.empty()) return {};
    Box2 b{vertices.front(), vertices.front()};
    for (const Vec2 &v : vertices) {
      b.lo.x = std::min(b.lo.x, v.x);
      b.lo.y = std::min(b.lo.y, v.y);
      b.hi.x = std::max(b.hi.x, v.x);
      b.hi.y = std::max(b.hi.y, v.y);
    }
    return b;
  }

  double signed_area() const {
    double a = 0.0;
    for (std::size_t i = 0, n = vertices.size(); i < n; ++i) {
      a += cross(vertices[i], vertices[(i + 1) % n]);
    }
    return 0.5 * a;
  }

  // Even-odd rule; points exactly on an edge may land on either side.
  bool contains(Vec2 p) const {
    bool inside = false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 a = vertices[i];
      const Vec2 b = vertices[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x_at) inside = !inside;
      }
    }
    return inside;
  }
};

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = squared_norm(ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

// Proper or touching intersection of closed segments ab and cd.
inline bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
    const double v = cross(q - p, r - p);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
           q.y <= std::max(p.y, r.y);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, c, b)) return true;
  if (o2 == 0 && on_segment(a, d, b)) return true;
  if (o3 == 0 && on_segment(c, a, d)) return true;
  if (o4 == 0 && on_segment(c, b, d)) return true;
  return false;
}

// True when no two non-adjacent edges intersect.
inline bool is_simple(const Polygon &poly) {
  const auto &v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

}  // namespace firesquad

#include "firesquad/hsfm.hpp"

#include <cmath>
#include <numbers>

namespace firesquad {

Vec2 AgentState::velocity() const { return rotation(theta) * v; }

Mat2 rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Mat2{c, -s, s, c};
}

TorqueGains torque_gains(double inertia, double f_acc_norm, const ControlParams &cp) {
  const double lambda = cp.k_lambda * f_acc_norm;
  return {inertia * lambda, inertia * (1.0 + cp.alpha) * std::sqrt(lambda / cp.alpha)};
}

ForceBreakdown make_breakdown(const GoalForce &goal, Vec2 f_agents, Vec2 f_border) {
  ForceBreakdown fb;
  fb.f_acc = goal.force;
  fb.phi_acc = goal.phase;
  fb.f_agents = f_agents;
  fb.f_border = f_border;
  fb.f_total = goal.force + f_agents + f_border;
  return fb;
}

GoalForce goal_force(const AgentState &a, Vec2 target, const ControlParams &cp) {
  const Vec2 to_target = target - a.p;
  const Vec2 e = norm(to_target) < 1e-9 ? Vec2{} : to_target / norm(to_target);
  GoalForce g;
  g.force = a.m * (cp.v_des * e - a.velocity()) / cp.tau;
  // A vanishing force keeps the current heading as its phase.
  g.phase = squared_norm(g.force) == 0.0 ? a.theta : angle_of(g.force);
  return g;
}

int quadrant_of(double relative_angle) {
  constexpr double q = std::numbers::pi / 4.0;
  const double a = wrap_angle(relative_angle);
  if (a >= -q && a < q) return 1;
  if (a >= q && a < 3.0 * q) return 2;
  if (a >= -3.0 * q && a < -q) return 4;
  return 3;
}

std::vector<ContactSample> border_contacts(const AgentState &a, const GridMap &map, const ContactParams &cp) {
  const double w = map.resolution();
  const Vec2 g = map.to_grid(a.p);
  const int ci = static_cast<int>(std::floor(g.x));
  const int cj = static_cast<int>(std::floor(g.y));
  const double range2 = cp.quadrant_range * cp.quadrant_range;

  struct Best {
    double d2 = 0.0;
    std::size_t index = 0;
    bool found = false;
  };
  std::array<Best, 4> best{};

  auto consider = [&](int i, int j) {
    const Cell c{i, j};
    if (!map.in_bounds(c) || !map.occupied(c)) return;
    const Vec2 center = map.cell_center(c);
    const Vec2 rel = center - a.p;
    const double d2 = squared_norm(rel);
    if (d2 > range2) return;
    const int q = d2 == 0.0 ? 1 : quadrant_of(angle_of(rel) - a.theta);
    Best &b = best[q - 1];
    const std::size_t idx = map.index(c);
    if (!b.found || d2 < b.d2 || (d2 == b.d2 && idx < b.index)) b = {d2, idx, true};
  };

  const int k_max = static_cast<int>(std::ceil(cp.quadrant_range / w)) + 1;
  for (int k = 0; k <= k_max; ++k) {
    // Every center on ring k lies at least (k - 1) w away from p.
    const double reach = (k - 1.0) * w;
    if (reach > cp.quadrant_range) break;
    bool all_settled = true;
    for (const Best &b : best) all_settled = all_settled && b.found && reach * reach > b.d2;
    if (all_settled) break;
    if (k == 0) {
      consider(ci, cj);
      continue;
    }
    for (int d = -k; d <= k; ++d) {
      consider(ci + d, cj - k);
      consider(ci + d, cj + k);
    }
    for (int d = -k + 1; d <= k - 1; ++d) {
      consider(ci - k, cj + d);
      consider(ci + k, cj + d);
    }
  }

  std::vector<ContactSample> out;
  const double inflate = std::numbers::sqrt2 / 2.0 * w;
  for (int q = 0; q < 4; ++q) {
    if (!best[q].found) continue;
    ContactSample s;
    s.quadrant = q + 1;
    s.p_k = map.cell_center(map.cell_of_index(best[q].index));
    const Vec2 away = a.p - s.p_k;
    s.d = norm(away) - inflate;
    // An agent centered on the cell is pushed backwards.
    s.n = squared_norm(away) == 0.0 ? -unit_from_angle(a.theta) : away / norm(away);
    s.t = perp(s.n);
    out.push_back(s);
  }
  return out;
}

double border_potential(double r, double d, const ContactParams &cp) { return cp.phi0_b * std::exp((r - d) / cp.c_b); }

double soft_potential(double r, double d, const ContactParams &cp) {
  if (d > r) return 0.0;
  if (d <= cp.d_min) return (r - d) / (r - cp.d_min) * cp.phi0_s;
  return cp.phi0_s;
}

Vec2 border_force(const ContactSample &s, const AgentState &a, const ContactParams &cp) {
  Vec2 f = border_potential(a.r, s.d, cp) * s.n;
  if (s.d <= a.r) {
    const double phi_s = soft_potential(a.r, s.d, cp);
    f += cp.c_s * phi_s * s.n + (1.0 - cp.c_s) * phi_s * a.v.y * s.t;
  }
  return f;
}

Vec2 agent_agent_force(const AgentState &a, const AgentState &b, bool same_squad, const SocialParams &sp) {
  const double amp = same_squad ? sp.a_intra : sp.a_inter;
  const double r_sum = a.r + b.r;
  const double cap = amp * std::exp(r_sum / sp.b);
  const Vec2 d = a.p - b.p;
  const Vec2 y = (b.velocity() - a.velocity()) * sp.lookahead;
  const Vec2 dy = d - y;
  const double nd = norm(d), ndy = norm(dy);
  if (nd < 1e-12 || ndy < 1e-12) return Vec2{cap, 0.0};
  const double s = nd + ndy;
  const double beta = 0.5 * std::sqrt(std::max(0.0, s * s - squared_norm(y)));
  const Vec2 dir = 0.5 * (d / nd + dy / ndy);
  if (beta < 1e-12) return normalized(dir) * cap;
  Vec2 f = amp * std::exp((r_sum - beta) / sp.b) * (s / (2.0 * beta)) * dir;
  const double mag = norm(f);
  if (mag > cap) f = f * (cap / mag);
  return f;
}

Vec2 cohesion_force(const AgentState &a, std::span<const AgentState> squad, const SocialParams &sp) {
  if (squad.size() < 2) return {};
  Vec2 centroid{};
  for (const AgentState &s : squad) centroid += s.p;
  centroid = centroid / static_cast<double>(squad.size());
  const Vec2 to_c = centroid - a.p;
  const double dist = norm(to_c);
  if (dist <= sp.d_coh) return {};
  return (sp.k_coh * a.m / dist) * to_c;
}

ControlInputs control_inputs(const AgentState &a, const ForceBreakdown &fb, const ControlParams &cp,
                             const TorqueGains &gains) {
  const Mat2 R = rotation(a.theta);
  ControlInputs u;
  u.u_f = dot(fb.f_total, R.col0());
  u.u_o = cp.c_o * dot(fb.f_total - fb.f_acc, R.col1()) - cp.c_des * a.v.y;
  u.u_theta = -gains.c_theta * wrap_angle(a.theta - fb.phi_acc) - gains.c_omega * a.omega;
  return u;
}

StateDerivative dynamics(const AgentState &a, const ControlInputs &u) {
  StateDerivative d;
  d.p_dot = rotation(a.theta) * a.v;
  d.theta_dot = a.omega;
  d.v_dot = Vec2{u.u_f, u.u_o} / a.m;
  d.omega_dot = u.u_theta / a.I;
  return d;
}

}  // namespace firesquad

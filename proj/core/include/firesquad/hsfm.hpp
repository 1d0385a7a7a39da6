#pragma once

// Headed social force model: body-frame locomotion, goal, agent and border
// forces with the quadrant soft-contact model, and squad cohesion.

#include <array>
#include <optional>
#include <span>

#include "firesquad/geometry.hpp"
#include "firesquad/grid_map.hpp"

namespace firesquad {

struct AgentState {
  Vec2 p{};             // world position, m
  double theta = 0.0;   // heading, rad in (-pi, pi]
  Vec2 v{};             // body frame: x forward, y orthogonal (left), m/s
  double omega = 0.0;   // rad/s
  double m = 80.0;      // kg
  double I = 2.5;       // kg m^2, 0.5 m r^2 for a disc
  double r = 0.25;      // m

  // World-frame velocity R(theta) v.
  Vec2 velocity() const;
};

struct ControlParams {
  double c_o = 1.0;
  double c_des = 500.0;
  double v_des = 1.5;  // m/s
  double tau = 0.5;    // s
  // Torque gain configuration: C_theta = I k_lambda |f_acc|,
  // C_omega = I (1 + alpha) sqrt(k_lambda |f_acc| / alpha).
  double k_lambda = 0.3;
  double alpha = 3.0;
};

struct TorqueGains {
  double c_theta = 0.0;
  double c_omega = 0.0;
};

TorqueGains torque_gains(double inertia, double f_acc_norm, const ControlParams &cp);

struct ContactParams {
  double c_s = 0.5;
  double phi0_b = 11.0;
  double c_b = 0.2;
  double phi0_s = 1200.0;
  double d_min = 0.0;           // m
  double quadrant_range = 2.0;  // m
};

struct SocialParams {
  double a_intra = 80.0;    // N
  double a_inter = 2000.0;  // N
  double b = 0.3;           // m
  double lookahead = 0.5;   // s, relative displacement horizon of the elliptical potential
  double k_coh = 1.5;       // m/s^2, cohesion acceleration
  double d_coh = 0.634;     // m, cohesion dead zone around the centroid
};

struct ForceBreakdown {
  Vec2 f_acc{};
  double phi_acc = 0.0;
  Vec2 f_agents{};  // agent repulsion plus squad cohesion
  Vec2 f_border{};
  Vec2 f_total{};
};

Mat2 rotation(double theta);

struct GoalForce {
  Vec2 force{};
  double phase = 0.0;
};

// m (v_des e - p_dot) / tau with e the unit direction to the target; pure
// braking when the target coincides with the agent.
GoalForce goal_force(const AgentState &a, Vec2 target, const ControlParams &cp);

// f_total = f_acc + f_agents + f_border; phi_acc is the goal force phase.
ForceBreakdown make_breakdown(const GoalForce &goal, Vec2 f_agents, Vec2 f_border);

struct ContactSample {
  Vec2 p_k{};  // occupied cell center
  double d = 0.0;
  Vec2 n{};  // from the cell towards the agent
  Vec2 t{};  // perp(n)
  int quadrant = 0;  // 1..4; I is centered on the heading, II on its left
};

// Quadrant of a direction relative to the heading: I [-pi/4, pi/4),
// II [pi/4, 3pi/4), IV [-3pi/4, -pi/4), III the rest.
int quadrant_of(double relative_angle);

// Closest occupied cell center per quadrant within quadrant_range. The cell is
// treated as a circle of radius (sqrt 2 / 2) w, so d = |p - p_k| - (sqrt 2 / 2) w.
std::vector<ContactSample> border_contacts(const AgentState &a, const GridMap &map, const ContactParams &cp);

double border_potential(double r, double d, const ContactParams &cp);
double soft_potential(double r, double d, const ContactParams &cp);

Vec2 border_force(const ContactSample &s, const AgentState &a, const ContactParams &cp);

// Elliptical repulsion on a exerted by b. The effective distance
//   beta = 0.5 sqrt((|d| + |d - y|)^2 - |y|^2),  d = p_a - p_b,  y = (v_b - v_a) lookahead
// enters A exp((r_a + r_b - beta) / B); the force follows the potential gradient.
// At zero relative velocity it reduces to A exp((r_a + r_b - |d|) / B) along d.
Vec2 agent_agent_force(const AgentState &a, const AgentState &b, bool same_squad, const SocialParams &sp);

// Constant k_coh m pull towards the squad centroid beyond d_coh; zero inside.
Vec2 cohesion_force(const AgentState &a, std::span<const AgentState> squad, const SocialParams &sp);

struct ControlInputs {
  double u_f = 0.0;
  double u_o = 0.0;
  double u_theta = 0.0;
};

// u_f = f . e_x, u_o = C_o (f - f_acc) . e_y - C_des v_y,
// u_theta = -C_theta wrap(theta - phi_acc) - C_omega omega.
ControlInputs control_inputs(const AgentState &a, const ForceBreakdown &fb, const ControlParams &cp,
                             const TorqueGains &gains);

struct StateDerivative {
  Vec2 p_dot{};
  double theta_dot = 0.0;
  Vec2 v_dot{};
  double omega_dot = 0.0;
};

StateDerivative dynamics(const AgentState &a, const ControlInputs &u);

}  // namespace firesquad

#include "firesquad/integrator.hpp"

#include <algorithm>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>
#include <cmath>
#include <numbers>

namespace firesquad {

struct Dopri5Stepper::Impl {
  boost::numeric::odeint::runge_kutta_dopri5<OdeState> stepper;
  std::size_t size = 0;  // odeint sizes its buffers once, on the first step
};

Dopri5Stepper::Dopri5Stepper() : impl_(std::make_unique<Impl>()) {}
Dopri5Stepper::~Dopri5Stepper() = default;
Dopri5Stepper::Dopri5Stepper(Dopri5Stepper &&) noexcept = default;
Dopri5Stepper &Dopri5Stepper::operator=(Dopri5Stepper &&) noexcept = default;

void Dopri5Stepper::step(const OdeRhs &rhs, OdeState &x, double t, double dt) {
  if (x.size() != impl_->size) {
    impl_->stepper = {};
    impl_->size = x.size();
  }
  OdeState err(x.size());
  auto system = [&rhs](const OdeState &s, OdeState &d, double time) { rhs(s, d, time); };
  impl_->stepper.do_step(system, x, t, dt, err);
  last_error_ = 0.0;
  for (double e : err) last_error_ = std::max(last_error_, std::abs(e));
}

void Dopri5Stepper::reset() { impl_->stepper.reset(); }

bool IntegratorReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const IntegratorCheck &c) { return c.passed; });
}

namespace {

// Integrates over [0, t_end] with steps of at most dt, recording the max error
// against `exact` at every step end.
template <class Exact>
double max_error_over(const OdeRhs &rhs, OdeState x, double t_end, double dt, Exact exact) {
  Dopri5Stepper stepper;
  const auto n = static_cast<int>(std::ceil(t_end / dt - 1e-12));
  const double h = t_end / n;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    stepper.step(rhs, x, k * h, h);
    const OdeState ref = exact((k + 1) * h);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - ref[i]));
  }
  return worst;
}

}  // namespace

IntegratorReport integrator_self_test(double dt) {
  IntegratorReport report;
  auto add = [&](std::string name, double err, double tol, bool strict_zero = false) {
    report.checks.push_back({std::move(name), err, tol, strict_zero ? err == 0.0 : err < tol});
  };

  const OdeRhs decay = [](const OdeState &x, OdeState &d, double) { d[0] = -x[0]; };
  add("decay", max_error_over(decay, {1.0}, 5.0, dt, [](double t) { return OdeState{std::exp(-t)}; }), 1e-6);

  const OdeRhs still = [](const OdeState &, OdeState &d, double) { d[0] = 0.0; };
  add("constant", max_error_over(still, {0.75}, 5.0, dt, [](double) { return OdeState{0.75}; }), 0.0, true);

  const OdeRhs oscillator = [](const OdeState &x, OdeState &d, double) {
    d[0] = x[1];
    d[1] = -x[0];
  };
  const double period = 2.0 * std::numbers::pi;
  add("oscillator",
      max_error_over(oscillator, {1.0, 0.0}, period, dt, [](double t) { return OdeState{std::cos(t), -std::sin(t)}; }),
      1e-5);
  return report;
}

}  // namespace firesquad

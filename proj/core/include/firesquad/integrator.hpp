#pragma once

// Fixed-step Dormand-Prince (5th order) integration of a first-order system.

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace firesquad {

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState &x, OdeState &dxdt, double t)>;

class Dopri5Stepper {
 public:
  Dopri5Stepper();
  ~Dopri5Stepper();
  Dopri5Stepper(Dopri5Stepper &&) noexcept;
  Dopri5Stepper &operator=(Dopri5Stepper &&) noexcept;

  // Advances x from t to t + dt in place.
  void step(const OdeRhs &rhs, OdeState &x, double t, double dt);
  // Forget the cached end-of-step derivative; needed whenever the right-hand
  // side or the state changed between steps.
  void reset();
  // Max-norm of the embedded 4th-order error estimate of the last step.
  double last_error() const { return last_error_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double last_error_ = 0.0;
};

struct IntegratorCheck {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct IntegratorReport {
  std::vector<IntegratorCheck> checks;
  bool passed() const;
};

// dy/dt = -y over [0, 5] against exp(-t) (1e-6), dy/dt = 0 (exact) and a unit
// harmonic oscillator over one period (1e-5), all with a 0.06 s nominal step.
IntegratorReport integrator_self_test(double dt = 0.06);

}  // namespace firesquad

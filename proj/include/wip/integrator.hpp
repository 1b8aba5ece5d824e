#pragma once

#include <stdexcept>
#include <string>

namespace wip {

class NonFiniteDerivative : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One classical fourth-order Runge-Kutta step for y' = rhs(t, y).
///
/// State is any Eigen vector type (anything with +, scalar * and allFinite()).
template <class State, class Rhs>
State rk4_step(const Rhs& rhs, const State& y, double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  auto eval = [&](double ts, const State& ys) {
    State k = rhs(ts, ys);
    if (!k.allFinite()) {
      throw NonFiniteDerivative("non-finite derivative at t=" + std::to_string(ts));
    }
    return k;
  };
  const State k1 = eval(t, y);
  const State k2 = eval(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
  const State k3 = eval(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
  const State k4 = eval(t + dt, State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace wip

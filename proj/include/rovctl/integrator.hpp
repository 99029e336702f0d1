#pragma once

#include <string>

#include <Eigen/Dense>

#include "rovctl/errors.hpp"

namespace rovctl {

/// Classical fourth-order Runge-Kutta step for y' = f(t, y).
/// `State` is any fixed or dynamic Eigen vector. Throws NumericalFault when a
/// stage derivative is not finite.
template <class State, class Derivative>
State rk4_step(const State& y, double t, double dt, Derivative&& f) {
  if (!(dt > 0.0)) throw InvalidParameter("rk4 step size must be positive");
  auto checked = [&](double ts, const State& ys) {
    State k = f(ts, ys);
    if (!k.allFinite()) throw NumericalFault("non-finite derivative at t=" + std::to_string(ts));
    return k;
  };
  const double half = 0.5 * dt;
  const State k1 = checked(t, y);
  const State k2 = checked(t + half, State(y + half * k1));
  const State k3 = checked(t + half, State(y + half * k2));
  const State k4 = checked(t + dt, State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace rovctl

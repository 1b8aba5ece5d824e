#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>

#include "wip/params.hpp"

namespace wip {

using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Configuration (x, y, theta, alpha, phi1, phi2) and its six velocities.
/// Angles are unwrapped reals.
struct FullState {
  double x = 0, y = 0, theta = 0, alpha = 0, phi1 = 0, phi2 = 0;
  double x_dot = 0, y_dot = 0, theta_dot = 0, alpha_dot = 0, phi1_dot = 0, phi2_dot = 0;

  Vec6 q() const { return (Vec6() << x, y, theta, alpha, phi1, phi2).finished(); }
  Vec6 qdot() const {
    return (Vec6() << x_dot, y_dot, theta_dot, alpha_dot, phi1_dot, phi2_dot).finished();
  }

  static FullState from_vectors(const Vec6& q, const Vec6& v) {
    return FullState{q[0], q[1], q[2], q[3], q[4], q[5], v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  bool finite() const { return q().allFinite() && qdot().allFinite(); }
};

/// Group element on SE(2) x S^1, shape (alpha, alpha_dot) and the two
/// nonholonomic momenta. phi is the mean wheel angle.
struct ReducedState {
  double x = 0, y = 0, theta = 0, phi = 0;
  double alpha = 0, alpha_dot = 0;
  double p1 = 0, p2 = 0;

  bool finite() const {
    for (double v : {x, y, theta, phi, alpha, alpha_dot, p1, p2}) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

/// Wheel torques [N m].
struct Controls {
  double tau1 = 0, tau2 = 0;
};

/// Generalized forces conjugate to the mean wheel angle and the heading.
struct MomentumInputs {
  double u1 = 0, u2 = 0;
};

/// Mean-wheel coordinates (x, y, theta, alpha, phi) with velocities.
struct MeanWheelState {
  double x = 0, y = 0, theta = 0, alpha = 0, phi = 0;
  double x_dot = 0, y_dot = 0, theta_dot = 0, alpha_dot = 0, phi_dot = 0;
};

/// Builds a full state whose planar and heading rates satisfy the rolling
/// constraints exactly.
inline FullState admissible_state(double x, double y, double theta, double alpha, double phi1,
                                  double phi2, double alpha_dot, double phi1_dot,
                                  double phi2_dot, const Params& p) {
  const double v = 0.5 * p.r * (phi1_dot + phi2_dot);
  FullState s{x, y, theta, alpha, phi1, phi2};
  s.x_dot = v * std::cos(theta);
  s.y_dot = v * std::sin(theta);
  s.theta_dot = p.r / p.d * (phi2_dot - phi1_dot);
  s.alpha_dot = alpha_dot;
  s.phi1_dot = phi1_dot;
  s.phi2_dot = phi2_dot;
  return s;
}

/// Residuals of the three rolling constraints at a single state.
inline std::array<double, 3> constraint_residual(const FullState& s, const Params& p) {
  const double v = 0.5 * p.r * (s.phi1_dot + s.phi2_dot);
  return {std::abs(s.x_dot - v * std::cos(s.theta)), std::abs(s.y_dot - v * std::sin(s.theta)),
          std::abs(s.theta_dot - p.r / p.d * (s.phi2_dot - s.phi1_dot))};
}

/// u = (tau1 + tau2, d (tau2 - tau1) / 2r): the virtual work of the wheel
/// torques along the rolling and yaw generators.
inline MomentumInputs u_from_tau(const Controls& c, const Params& p) {
  return {c.tau1 + c.tau2, p.d / (2.0 * p.r) * (c.tau2 - c.tau1)};
}

inline Controls tau_from_u(const MomentumInputs& u, const Params& p) {
  const double diff = 2.0 * p.r / p.d * u.u2;  // tau2 - tau1
  return {0.5 * (u.u1 - diff), 0.5 * (u.u1 + diff)};
}

// ---------------------------------------------------------------------------
// Symmetry actions
// ---------------------------------------------------------------------------

/// Element of SE(2) x S^1; the S^1 part shifts both wheel angles.
struct GroupShift {
  double x = 0, y = 0, theta = 0, phi = 0;
};

inline FullState act(const GroupShift& g, const FullState& s) {
  const double c = std::cos(g.theta), sn = std::sin(g.theta);
  FullState out = s;
  out.x = c * s.x - sn * s.y + g.x;
  out.y = sn * s.x + c * s.y + g.y;
  out.theta = s.theta + g.theta;
  out.phi1 = s.phi1 + g.phi;
  out.phi2 = s.phi2 + g.phi;
  out.x_dot = c * s.x_dot - sn * s.y_dot;
  out.y_dot = sn * s.x_dot + c * s.y_dot;
  return out;
}

inline ReducedState act(const GroupShift& g, const ReducedState& s) {
  const double c = std::cos(g.theta), sn = std::sin(g.theta);
  ReducedState out = s;
  out.x = c * s.x - sn * s.y + g.x;
  out.y = sn * s.x + c * s.y + g.y;
  out.theta = s.theta + g.theta;
  out.phi = s.phi + g.phi;
  return out;
}

}  // namespace wip

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "wip/connection.hpp"
#include "wip/dynamics_full.hpp"
#include "wip/params.hpp"
#include "wip/state.hpp"

namespace wip {

class NonPositiveShapeMass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReducedRhs {
  double p1_dot = 0, p2_dot = 0;
  double alpha_ddot = 0;
  double x_dot = 0, y_dot = 0, theta_dot = 0, phi_dot = 0;
};

/// Momentum equations along the rolling (p1) and yaw (p2) generators.
inline std::pair<double, double> momentum_rhs(double alpha, double alpha_dot, double p1,
                                              double p2, const MomentumInputs& u,
                                              const Params& p) {
  const double f = f_of_alpha(alpha, p);
  const double h = h_const(p);
  const double mbb = p.m_b * p.b;
  const double sa = std::sin(alpha);
  const double p1_dot = mbb * p.r * sa / (f * f) * p2 * p2 + u.u1;
  const double p2_dot =
      -mbb * p.r * sa * p2 / (f * h) * (p1 - p.r * mbb * std::cos(alpha) * alpha_dot) + u.u2;
  return {p1_dot, p2_dot};
}

/// Pitch dynamics m(alpha) alpha_ddot = N(alpha, alpha_dot, p2, u1).
/// The u1 term is the reaction of the rolling drive on the body.
inline double shape_rhs(double alpha, double alpha_dot, double p2, double u1,
                        const Params& p) {
  const double mass = shape_mass(alpha, p);
  if (!(mass > 0.0)) throw NonPositiveShapeMass("shape-space mass is not positive");
  const double h = h_const(p);
  const double f = f_of_alpha(alpha, p);
  const double mbb = p.m_b * p.b;
  const double coupling = p.r * p.r * mbb * mbb;  // r^2 m_b^2 b^2
  const double s2a = std::sin(2.0 * alpha);
  const double rhs = -coupling * s2a / (2.0 * h) * alpha_dot * alpha_dot +
                     0.5 * (h * f_prime(alpha, p) - coupling * s2a) / (h * f * f) * p2 * p2 -
                     p.r * mbb * std::cos(alpha) / h * u1 + mbb * p.g * std::sin(alpha);
  return rhs / mass;
}

/// Momentum and shape dynamics plus reconstruction g_dot = g xi.
inline ReducedRhs reduced_rhs(const ReducedState& s, const MomentumInputs& u, const Params& p) {
  ReducedRhs out;
  std::tie(out.p1_dot, out.p2_dot) = momentum_rhs(s.alpha, s.alpha_dot, s.p1, s.p2, u, p);
  out.alpha_ddot = shape_rhs(s.alpha, s.alpha_dot, s.p2, u.u1, p);
  const BodyVelocity xi = body_velocity_from_momenta(s.alpha, s.alpha_dot, s.p1, s.p2, p);
  out.x_dot = xi[0] * std::cos(s.theta) - xi[1] * std::sin(s.theta);
  out.y_dot = xi[0] * std::sin(s.theta) + xi[1] * std::cos(s.theta);
  out.theta_dot = xi[2];
  out.phi_dot = xi[3];
  return out;
}

inline ReducedState full_to_reduced(const FullState& s, const Params& p) {
  const auto [p1, p2] = momenta_from_full(s, p);
  return {s.x, s.y, s.theta, 0.5 * (s.phi1 + s.phi2), s.alpha, s.alpha_dot, p1, p2};
}

/// Reference values fixing the wheel-angle difference through the holonomic
/// relation phi2 - phi1 = (d/r)(theta - theta0) + (phi2_0 - phi1_0).
struct HolonomicAnchor {
  double theta0 = 0, phi1_0 = 0, phi2_0 = 0;

  static HolonomicAnchor from(const FullState& s) { return {s.theta, s.phi1, s.phi2}; }
};

inline FullState reduced_to_full(const ReducedState& s, const HolonomicAnchor& anchor,
                                 const Params& p) {
  const double half_ratio = 0.5 * p.d / p.r;
  const double half_diff =
      half_ratio * (s.theta - anchor.theta0) + 0.5 * (anchor.phi2_0 - anchor.phi1_0);
  const BodyVelocity xi = body_velocity_from_momenta(s.alpha, s.alpha_dot, s.p1, s.p2, p);
  const double ct = std::cos(s.theta), st = std::sin(s.theta);
  FullState out;
  out.x = s.x;
  out.y = s.y;
  out.theta = s.theta;
  out.alpha = s.alpha;
  out.phi1 = s.phi - half_diff;
  out.phi2 = s.phi + half_diff;
  out.x_dot = xi[0] * ct - xi[1] * st;
  out.y_dot = xi[0] * st + xi[1] * ct;
  out.theta_dot = xi[2];
  out.alpha_dot = s.alpha_dot;
  out.phi1_dot = xi[3] - half_ratio * xi[2];
  out.phi2_dot = xi[3] + half_ratio * xi[2];
  return out;
}

}  // namespace wip

#pragma once

#include <cmath>

#include "wip/params.hpp"
#include "wip/state.hpp"

namespace wip {

/// Kinetic minus potential energy in the six full coordinates.
inline double lagrangian_full(const FullState& s, const Params& p) {
  const double mass = p.m_b + 2.0 * p.m_W;
  const double mbb = p.m_b * p.b;
  const double sa = std::sin(s.alpha), ca = std::cos(s.alpha);
  const double st = std::sin(s.theta), ct = std::cos(s.theta);
  return 0.5 * mass * (s.x_dot * s.x_dot + s.y_dot * s.y_dot) +
         0.5 * i_theta(s.alpha, p) * s.theta_dot * s.theta_dot +
         0.5 * (mbb * p.b + p.I_Byy) * s.alpha_dot * s.alpha_dot +
         0.5 * p.I_Wyy * (s.phi1_dot * s.phi1_dot + s.phi2_dot * s.phi2_dot) -
         mbb * sa * st * s.x_dot * s.theta_dot + mbb * ca * ct * s.alpha_dot * s.x_dot +
         mbb * sa * ct * s.theta_dot * s.y_dot + mbb * ca * st * s.alpha_dot * s.y_dot -
         mbb * p.g * ca;
}

/// dL/dq_dot for the full Lagrangian, ordered (x, y, theta, alpha, phi1, phi2).
inline Vec6 velocity_gradient(const FullState& s, const Params& p) {
  const double mass = p.m_b + 2.0 * p.m_W;
  const double mbb = p.m_b * p.b;
  const double sa = std::sin(s.alpha), ca = std::cos(s.alpha);
  const double st = std::sin(s.theta), ct = std::cos(s.theta);
  Vec6 grad;
  grad[0] = mass * s.x_dot - mbb * sa * st * s.theta_dot + mbb * ca * ct * s.alpha_dot;
  grad[1] = mass * s.y_dot + mbb * sa * ct * s.theta_dot + mbb * ca * st * s.alpha_dot;
  grad[2] = i_theta(s.alpha, p) * s.theta_dot + mbb * sa * (-st * s.x_dot + ct * s.y_dot);
  grad[3] = (mbb * p.b + p.I_Byy) * s.alpha_dot + mbb * ca * (ct * s.x_dot + st * s.y_dot);
  grad[4] = p.I_Wyy * s.phi1_dot;
  grad[5] = p.I_Wyy * s.phi2_dot;
  return grad;
}

/// Lagrangian in the (x, y, theta, alpha, phi) coordinates with phi the mean
/// wheel angle and the holonomic heading relation already substituted.
inline double lagrangian_mean_wheel(const MeanWheelState& s, const Params& p) {
  const double mass = p.m_b + 2.0 * p.m_W;
  const double mbb = p.m_b * p.b;
  const double sa = std::sin(s.alpha), ca = std::cos(s.alpha);
  const double st = std::sin(s.theta), ct = std::cos(s.theta);
  return 0.5 * mass * (s.x_dot * s.x_dot + s.y_dot * s.y_dot) +
         0.5 * f_of_alpha(s.alpha, p) * s.theta_dot * s.theta_dot +
         0.5 * (mbb * p.b + p.I_Byy) * s.alpha_dot * s.alpha_dot +
         0.5 * p.I_Wyy * 2.0 * s.phi_dot * s.phi_dot +
         mbb * sa * s.theta_dot * (-st * s.x_dot + ct * s.y_dot) +
         mbb * ca * s.alpha_dot * (ct * s.x_dot + st * s.y_dot) - mbb * p.g * ca;
}

/// l_c(alpha, alpha_dot, xi3, xi4) on the constraint surface xi1 = r xi4, xi2 = 0.
inline double reduced_constrained_lagrangian(double alpha, double alpha_dot, double xi3,
                                             double xi4, const Params& p) {
  const double mbb = p.m_b * p.b;
  return 0.5 * h_const(p) * xi4 * xi4 + p.r * mbb * std::cos(alpha) * alpha_dot * xi4 +
         0.5 * f_of_alpha(alpha, p) * xi3 * xi3 +
         0.5 * (mbb * p.b + p.I_Byy) * alpha_dot * alpha_dot - mbb * p.g * std::cos(alpha);
}

/// L composed with the rolling constraint map; independent of theta.
inline double constrained_lagrangian(double alpha, double alpha_dot, double phi1_dot,
                                     double phi2_dot, const Params& p, double theta = 0.0) {
  return lagrangian_full(
      admissible_state(0, 0, theta, alpha, 0, 0, alpha_dot, phi1_dot, phi2_dot, p), p);
}

/// Legendre transform E = q_dot . dL/dq_dot - L.
inline double total_energy(const FullState& s, const Params& p) {
  return s.qdot().dot(velocity_gradient(s, p)) - lagrangian_full(s, p);
}

}  // namespace wip

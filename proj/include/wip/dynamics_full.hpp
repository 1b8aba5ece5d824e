#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "wip/connection.hpp"
#include "wip/lagrangian.hpp"
#include "wip/params.hpp"
#include "wip/state.hpp"

namespace wip {

class SingularMassMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base accelerations and reconstructed fiber rates of the constrained model.
struct FullRhs {
  Eigen::Vector3d base_accel;  // (alpha_ddot, phi1_ddot, phi2_ddot)
  Eigen::Vector3d group_rate;  // (x_dot, y_dot, theta_dot) = -A r_dot
};

namespace detail {

/// Gaussian elimination with partial pivoting.
inline Eigen::Vector3d solve3(Eigen::Matrix3d m, Eigen::Vector3d rhs) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(m(row, col)) > std::abs(m(pivot, col))) pivot = row;
    }
    const double scale = m.cwiseAbs().maxCoeff();
    if (!(std::abs(m(pivot, col)) > 1e-14 * scale)) {
      throw SingularMassMatrix("constrained mass matrix is not invertible");
    }
    if (pivot != col) {
      m.row(pivot).swap(m.row(col));
      std::swap(rhs[pivot], rhs[col]);
    }
    for (int row = col + 1; row < 3; ++row) {
      const double factor = m(row, col) / m(col, col);
      m.row(row) -= factor * m.row(col);
      rhs[row] -= factor * rhs[col];
    }
  }
  Eigen::Vector3d x;
  for (int row = 2; row >= 0; --row) {
    double acc = rhs[row];
    for (int k = row + 1; k < 3; ++k) acc -= m(row, k) * x[k];
    x[row] = acc / m(row, row);
  }
  return x;
}

}  // namespace detail

/// Velocity Hessian of the constrained Lagrangian in r_dot = (alpha_dot, phi1_dot, phi2_dot).
inline Eigen::Matrix3d constrained_mass_matrix(double alpha, const Params& p) {
  const double k = p.r / p.d;
  const double coupling = 0.5 * p.r * p.m_b * p.b * std::cos(alpha);
  const double quarter_h = 0.25 * h_const(p);
  const double yaw = f_of_alpha(alpha, p) * k * k;
  Eigen::Matrix3d m;
  m << p.m_b * p.b * p.b + p.I_Byy, coupling, coupling,
       coupling, quarter_h + yaw, quarter_h - yaw,
       coupling, quarter_h - yaw, quarter_h + yaw;
  return m;
}

inline Eigen::Matrix3d constrained_mass_matrix_dalpha(double alpha, const Params& p) {
  const double k = p.r / p.d;
  const double coupling = -0.5 * p.r * p.m_b * p.b * std::sin(alpha);
  const double yaw = f_prime(alpha, p) * k * k;
  Eigen::Matrix3d m;
  m << 0.0, coupling, coupling,
       coupling, yaw, -yaw,
       coupling, -yaw, yaw;
  return m;
}

/// s_dot = -A(theta) r_dot.
inline Eigen::Vector3d reconstruct_group_rates(const FullState& s, const Params& p) {
  return -ehresmann_at(s.theta, p) *
         Eigen::Vector3d(s.alpha_dot, s.phi1_dot, s.phi2_dot);
}

/// Curvature forcing -(dL/ds_dot^b) B^b_{beta gamma} r_dot^gamma for each base equation.
///
/// The pairing is invariant under rotating momentum and curvature together, so it
/// is evaluated at heading zero with the fiber rates rebuilt from r_dot. There the
/// lateral velocity is exactly zero, which keeps upright steady turns free of the
/// cancellation noise that the unstable tilt mode would otherwise amplify.
inline Eigen::Vector3d curvature_forcing(const FullState& s, const Params& p) {
  const Eigen::Vector3d r_dot(s.alpha_dot, s.phi1_dot, s.phi2_dot);
  FullState body = s;
  body.theta = 0.0;
  const Eigen::Vector3d rates = -ehresmann_at(0.0, p) * r_dot;
  body.x_dot = rates[0];
  body.y_dot = rates[1];
  body.theta_dot = rates[2];
  const Vec6 momentum = velocity_gradient(body, p);
  const Curvature curv = curvature_at(0.0, p);
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int b = 0; b < 3; ++b) out -= momentum[b] * (curv[b] * r_dot);
  return out;
}

/// Reduced Euler-Lagrange equations with curvature forcing:
///   d/dt(dL_c/dr_dot) - dL_c/dr = -(dL/ds_dot) B r_dot + (0, tau1, tau2).
/// L_c does not depend on the fiber coordinates, so the A dL_c/ds term drops.
/// The velocities of `s` are taken to be admissible.
inline FullRhs full_rhs(const FullState& s, const Controls& c, const Params& p) {
  const Eigen::Vector3d r_dot(s.alpha_dot, s.phi1_dot, s.phi2_dot);
  const Eigen::Matrix3d mass = constrained_mass_matrix(s.alpha, p);
  const Eigen::Matrix3d mass_da = constrained_mass_matrix_dalpha(s.alpha, p);

  Eigen::Vector3d dlc_dr = Eigen::Vector3d::Zero();
  dlc_dr[kAlpha] = 0.5 * r_dot.dot(mass_da * r_dot) + p.m_b * p.g * p.b * std::sin(s.alpha);

  const Eigen::Vector3d force = -s.alpha_dot * (mass_da * r_dot) + dlc_dr +
                                curvature_forcing(s, p) + Eigen::Vector3d(0.0, c.tau1, c.tau2);
  return {detail::solve3(mass, force), reconstruct_group_rates(s, p)};
}

/// Second derivatives of all six coordinates implied by full_rhs, obtained by
/// differentiating the rolling constraints.
inline Vec6 full_accelerations(const FullState& s, const FullRhs& rhs, const Params& p) {
  const double sum_rate = s.phi1_dot + s.phi2_dot;
  const double sum_acc = rhs.base_accel[kPhi1] + rhs.base_accel[kPhi2];
  const double theta_dot = p.r / p.d * (s.phi2_dot - s.phi1_dot);
  const double ct = std::cos(s.theta), st = std::sin(s.theta);
  Vec6 acc;
  acc[0] = 0.5 * p.r * (ct * sum_acc - st * theta_dot * sum_rate);
  acc[1] = 0.5 * p.r * (st * sum_acc + ct * theta_dot * sum_rate);
  acc[2] = p.r / p.d * (rhs.base_accel[kPhi2] - rhs.base_accel[kPhi1]);
  acc[3] = rhs.base_accel[kAlpha];
  acc[4] = rhs.base_accel[kPhi1];
  acc[5] = rhs.base_accel[kPhi2];
  return acc;
}

/// Closed-form nonholonomic momenta (p1 along rolling, p2 along yaw).
inline std::pair<double, double> momenta_from_full(const FullState& s, const Params& p) {
  const double phi_dot = 0.5 * (s.phi1_dot + s.phi2_dot);
  const double theta_dot = p.r / p.d * (s.phi2_dot - s.phi1_dot);
  return {h_const(p) * phi_dot + p.r * p.m_b * p.b * std::cos(s.alpha) * s.alpha_dot,
          f_of_alpha(s.alpha, p) * theta_dot};
}

}  // namespace wip

#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>

#include "wip/params.hpp"

namespace wip {

// Fiber coordinates s = (x, y, theta), base coordinates r = (alpha, phi1, phi2).
enum FiberIndex : int { kX = 0, kY = 1, kTheta = 2 };
enum BaseIndex : int { kAlpha = 0, kPhi1 = 1, kPhi2 = 2 };

/// Ehresmann connection coefficients A^a_beta, rows a over s, columns beta
/// over r. The horizontal (admissible) velocities satisfy s_dot + A r_dot = 0.
using EhresmannCoeffs = Eigen::Matrix3d;

/// Curvature B^b_{beta gamma}, stored dense as [b][beta][gamma].
using Curvature = std::array<Eigen::Matrix3d, 3>;

inline EhresmannCoeffs ehresmann_at(double theta, const Params& p) {
  const double half_r = 0.5 * p.r;
  const double c = std::cos(theta), s = std::sin(theta);
  EhresmannCoeffs a;
  a << 0.0, -half_r * c, -half_r * c,
       0.0, -half_r * s, -half_r * s,
       0.0, p.r / p.d, -p.r / p.d;
  return a;
}

/// dA/dtheta; the connection depends on no other coordinate.
inline EhresmannCoeffs ehresmann_dtheta(double theta, const Params& p) {
  const double half_r = 0.5 * p.r;
  const double c = std::cos(theta), s = std::sin(theta);
  EhresmannCoeffs a;
  a << 0.0, half_r * s, half_r * s,
       0.0, -half_r * c, -half_r * c,
       0.0, 0.0, 0.0;
  return a;
}

/// B^b_{bg} = dA^b_b/dr^g - dA^b_g/dr^b + A^a_b dA^b_g/ds^a - A^a_g dA^b_b/ds^a.
/// The r-derivatives vanish and only s^a = theta contributes.
inline Curvature curvature_at(double theta, const Params& p) {
  const EhresmannCoeffs a = ehresmann_at(theta, p);
  const EhresmannCoeffs da = ehresmann_dtheta(theta, p);
  Curvature out;
  for (int b = 0; b < 3; ++b) {
    for (int beta = 0; beta < 3; ++beta) {
      for (int gamma = 0; gamma < 3; ++gamma) {
        out[b](beta, gamma) = a(kTheta, beta) * da(b, gamma) - a(kTheta, gamma) * da(b, beta);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nonholonomic connection for the SE(2) x S^1 symmetry
// ---------------------------------------------------------------------------

/// Lie algebra basis of se(2) x R: e1 surge, e2 sway, e3 yaw, e4 mean wheel roll.
using BodyVelocity = Eigen::Vector4d;

/// Local form: g^{-1} g_dot + A(alpha) alpha_dot = Gamma(alpha) p.
struct NonholoConnectionLocal {
  Eigen::Vector4d shape_form;            // coefficient of d(alpha) along e1..e4
  Eigen::Matrix<double, 4, 2> gamma;     // momenta -> body velocity
};

inline NonholoConnectionLocal nonholo_connection(double alpha, const Params& p) {
  const double h = h_const(p);
  const double roll = p.r * p.m_b * p.b * std::cos(alpha) / h;
  NonholoConnectionLocal c;
  c.shape_form << p.r * roll, 0.0, 0.0, roll;
  c.gamma << p.r / h, 0.0,
             0.0, 0.0,
             0.0, 1.0 / f_of_alpha(alpha, p),
             1.0 / h, 0.0;
  return c;
}

/// xi = -A(alpha) alpha_dot + Gamma(alpha) p. Always satisfies xi1 = r xi4, xi2 = 0.
inline BodyVelocity body_velocity_from_momenta(double alpha, double alpha_dot, double p1,
                                               double p2, const Params& p) {
  const NonholoConnectionLocal c = nonholo_connection(alpha, p);
  return -c.shape_form * alpha_dot + c.gamma * Eigen::Vector2d(p1, p2);
}

}  // namespace wip

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wip {

/// Raised when a parameter set is non-physical.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical constants of the wheeled inverted pendulum.
///
/// Body inertias are about the body centre of mass; the m_b b^2 parallel-axis
/// terms are added by the Lagrangian itself.
struct Params {
  double m_b;    // body mass [kg]
  double m_W;    // single wheel mass [kg]
  double b;      // COM height above the axle [m]
  double r;      // wheel radius [m]
  double d;      // wheel separation [m]
  double I_Bxx;  // [kg m^2]
  double I_Byy;
  double I_Bz;
  double I_Wyy;
  double I_Wzz;
  double g;      // [m/s^2]

  /// Desk-scale reference robot: 0.1 x 0.3 x 0.4 m box body, solid-disc wheels.
  static Params defaults() {
    constexpr double m_b = 5.0, m_W = 0.5, r = 0.1;
    constexpr double depth = 0.1, width = 0.3, height = 0.4;
    Params p{};
    p.m_b = m_b;
    p.m_W = m_W;
    p.b = 0.2;
    p.r = r;
    p.d = 0.4;
    p.I_Bxx = m_b * (width * width + height * height) / 12.0;
    p.I_Byy = m_b * (depth * depth + height * height) / 12.0;
    p.I_Bz = m_b * (width * width + depth * depth) / 12.0;
    p.I_Wyy = 0.5 * m_W * r * r;
    p.I_Wzz = 0.25 * m_W * r * r;
    p.g = 9.81;
    return p;
  }
};

// ---------------------------------------------------------------------------
// Inertia scalars
// ---------------------------------------------------------------------------

/// Yaw inertia I_theta(alpha).
inline double i_theta(double alpha, const Params& p) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  return 2.0 * p.I_Wzz + p.I_Bz * c * c + 2.0 * p.m_W * p.d * p.d +
         (p.I_Bxx + p.m_b * p.b * p.b) * s * s;
}

inline double i_theta_prime(double alpha, const Params& p) {
  return (p.I_Bxx + p.m_b * p.b * p.b - p.I_Bz) * std::sin(2.0 * alpha);
}

/// Locked yaw inertia f(alpha): I_theta plus the wheels' differential spin.
inline double f_of_alpha(double alpha, const Params& p) {
  return i_theta(alpha, p) + p.d * p.d / (2.0 * p.r * p.r) * p.I_Wyy;
}

inline double f_prime(double alpha, const Params& p) { return i_theta_prime(alpha, p); }

/// Locked rolling inertia h (constant).
inline double h_const(const Params& p) {
  return (p.m_b + 2.0 * p.m_W) * p.r * p.r + 2.0 * p.I_Wyy;
}

/// Pitch inertia with the rolling coupling eliminated, m(alpha).
inline double shape_mass(double alpha, const Params& p) {
  const double k = p.r * p.m_b * p.b * std::cos(alpha);
  return p.m_b * p.b * p.b + p.I_Byy - k * k / h_const(p);
}

/// Throws InvalidParams naming the first offending field.
inline void validate(const Params& p) {
  auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw InvalidParams(std::string("parameter '") + name +
                          "' must be finite and strictly positive");
    }
  };
  positive(p.m_b, "m_b");
  positive(p.m_W, "m_W");
  positive(p.b, "b");
  positive(p.r, "r");
  positive(p.d, "d");
  positive(p.I_Bxx, "I_Bxx");
  positive(p.I_Byy, "I_Byy");
  positive(p.I_Bz, "I_Bz");
  positive(p.I_Wyy, "I_Wyy");
  positive(p.I_Wzz, "I_Wzz");
  positive(p.g, "g");

  // m(alpha) is pi-periodic and even; a half-period grid covers it.
  constexpr int kSamples = 360;
  for (int i = 0; i <= kSamples; ++i) {
    const double alpha = std::numbers::pi * i / kSamples;
    if (!(shape_mass(alpha, p) > 0.0)) {
      throw InvalidParams("shape-space mass m(alpha) is not positive at alpha=" +
                          std::to_string(alpha));
    }
  }
}

}  // namespace wip

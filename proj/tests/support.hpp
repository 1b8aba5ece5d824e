#pragma once

// Finite-difference referees shared by the unit tests. These only call the
// scalar functions under test, never their analytic derivatives.

#include <Eigen/Core>
#include <cmath>
#include <functional>

#include "wip/wip.hpp"

namespace wip::testing {

inline Params defaults() { return Params::defaults(); }

inline double central(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Gradient of L in the velocities, step scaled to the velocity magnitude.
inline Vec6 fd_velocity_gradient(const FullState& s, const Params& p) {
  const double h = std::max(1.0, s.qdot().cwiseAbs().maxCoeff()) * 1e-3;
  Vec6 g;
  for (int i = 0; i < 6; ++i) {
    Vec6 vp = s.qdot(), vm = s.qdot();
    vp[i] += h;
    vm[i] -= h;
    g[i] = (lagrangian_full(FullState::from_vectors(s.q(), vp), p) -
            lagrangian_full(FullState::from_vectors(s.q(), vm), p)) /
           (2.0 * h);
  }
  return g;
}

/// Velocity Hessian of a scalar function of a velocity vector.
template <int N, class F>
Eigen::Matrix<double, N, N> fd_hessian(F&& f, const Eigen::Matrix<double, N, 1>& v,
                                       double h = 1e-2) {
  Eigen::Matrix<double, N, N> out;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      auto shifted = [&](double di, double dj) {
        Eigen::Matrix<double, N, 1> w = v;
        w[i] += di;
        w[j] += dj;
        return f(w);
      };
      out(i, j) = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) /
                  (4.0 * h * h);
    }
  }
  return out;
}

inline FullState random_state(StateSampler& rng) { return rng.next(); }

}  // namespace wip::testing

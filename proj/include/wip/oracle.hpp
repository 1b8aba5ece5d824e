#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wip/lagrangian.hpp"
#include "wip/params.hpp"
#include "wip/state.hpp"

namespace wip {

class RankDeficientSaddle : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InadmissibleVelocity : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite-difference steps. Velocity derivatives of a mechanical Lagrangian
/// act on a quadratic form, so central differences are exact for any step and
/// a step of the velocity's own magnitude minimises round-off. Configuration
/// steps are relative to max(1, |q_i|).
struct FdSteps {
  double config_rel = 1e-6;
  double velocity_rel = 1.0;  // times max(1, |q_dot|_inf)
};

/// Generic Lagrange-d'Alembert solver: unconstrained Lagrangian plus linear
/// velocity constraints C(q) q_dot = 0, every derivative by central differences.
///
/// Lagrangian: double(const Vector&, const Vector&)
/// Constraint: Eigen::Matrix<double, K, N>(const Vector&)
template <int N, int K, class Lagrangian, class Constraint>
class MultiplierOracle {
 public:
  using Vector = Eigen::Matrix<double, N, 1>;
  using Matrix = Eigen::Matrix<double, N, N>;
  using ConstraintMatrix = Eigen::Matrix<double, K, N>;

  struct Result {
    Vector accel;
    Eigen::Matrix<double, K, 1> multipliers;  // constraint force is C^T lambda
  };

  MultiplierOracle(Lagrangian lagrangian, Constraint constraint, FdSteps steps = {})
      : lagrangian_(std::move(lagrangian)), constraint_(std::move(constraint)), steps_(steps) {}

  Matrix mass_matrix(const Vector& q, const Vector& v) const {
    const double h = velocity_step(v);
    Matrix m;
    for (int i = 0; i < N; ++i) {
      for (int j = i; j < N; ++j) {
        Vector pp = v, pm = v, mp = v, mm = v;
        pp[i] += h; pp[j] += h;
        pm[i] += h; pm[j] -= h;
        mp[i] -= h; mp[j] += h;
        mm[i] -= h; mm[j] -= h;
        m(i, j) = (lagrangian_(q, pp) - lagrangian_(q, pm) - lagrangian_(q, mp) +
                   lagrangian_(q, mm)) / (4.0 * h * h);
        m(j, i) = m(i, j);
      }
    }
    return m;
  }

  Vector velocity_gradient(const Vector& q, const Vector& v) const {
    const double h = velocity_step(v);
    Vector g;
    for (int i = 0; i < N; ++i) {
      Vector plus = v, minus = v;
      plus[i] += h;
      minus[i] -= h;
      g[i] = (lagrangian_(q, plus) - lagrangian_(q, minus)) / (2.0 * h);
    }
    return g;
  }

  Vector config_gradient(const Vector& q, const Vector& v) const {
    Vector g;
    for (int i = 0; i < N; ++i) {
      const double h = config_step(q[i]);
      Vector plus = q, minus = q;
      plus[i] += h;
      minus[i] -= h;
      g[i] = (lagrangian_(plus, v) - lagrangian_(minus, v)) / (2.0 * h);
    }
    return g;
  }

  /// (d^2 L / dq_dot dq) q_dot as a directional derivative along q_dot.
  Vector mixed_term(const Vector& q, const Vector& v) const {
    const double eps = directional_step(q, v);
    if (eps == 0.0) return Vector::Zero();
    return (velocity_gradient(q + eps * v, v) - velocity_gradient(q - eps * v, v)) / (2.0 * eps);
  }

  /// C_dot q_dot.
  Eigen::Matrix<double, K, 1> constraint_bias(const Vector& q, const Vector& v) const {
    const double eps = directional_step(q, v);
    if (eps == 0.0) return Eigen::Matrix<double, K, 1>::Zero();
    return (constraint_(q + eps * v) - constraint_(q - eps * v)) / (2.0 * eps) * v;
  }

  /// Solves [M C^T; C 0] (q_ddot, -lambda) = (Q + forces, -C_dot q_dot).
  Result solve(const Vector& q, const Vector& v, const Vector& forces) const {
    constexpr int S = N + K;
    Eigen::Matrix<double, S, S> saddle = Eigen::Matrix<double, S, S>::Zero();
    const ConstraintMatrix c = constraint_(q);
    saddle.template topLeftCorner<N, N>() = mass_matrix(q, v);
    saddle.template topRightCorner<N, K>() = c.transpose();
    saddle.template bottomLeftCorner<K, N>() = c;

    Eigen::Matrix<double, S, 1> rhs;
    rhs.template head<N>() = config_gradient(q, v) - mixed_term(q, v) + forces;
    rhs.template tail<K>() = -constraint_bias(q, v);

    Eigen::FullPivLU<Eigen::Matrix<double, S, S>> lu(saddle);
    if (lu.rank() < S) {
      throw RankDeficientSaddle("saddle matrix has rank " + std::to_string(lu.rank()) +
                                " < " + std::to_string(S));
    }
    const Eigen::Matrix<double, S, 1> sol = lu.solve(rhs);
    return {sol.template head<N>(), -sol.template tail<K>()};
  }

  const Constraint& constraint() const { return constraint_; }

 private:
  double velocity_step(const Vector& v) const {
    return steps_.velocity_rel * std::max(1.0, v.cwiseAbs().maxCoeff());
  }

  double config_step(double qi) const { return steps_.config_rel * std::max(1.0, std::abs(qi)); }

  double directional_step(const Vector& q, const Vector& v) const {
    const double vmax = v.cwiseAbs().maxCoeff();
    if (vmax == 0.0) return 0.0;
    return config_step(q.cwiseAbs().maxCoeff()) / vmax;
  }

  Lagrangian lagrangian_;
  Constraint constraint_;
  FdSteps steps_;
};

// ---------------------------------------------------------------------------
// WIP instance
// ---------------------------------------------------------------------------

/// Rolling constraints as rows of C(q): two nonholonomic rows and the heading
/// relation in velocity form.
inline Eigen::Matrix<double, 3, 6> wip_constraint_matrix(const Vec6& q, const Params& p) {
  const double half_r = 0.5 * p.r;
  const double c = std::cos(q[2]), s = std::sin(q[2]);
  Eigen::Matrix<double, 3, 6> m;
  m << 1, 0, 0, 0, -half_r * c, -half_r * c,
       0, 1, 0, 0, -half_r * s, -half_r * s,
       0, 0, 1, 0, p.r / p.d, -p.r / p.d;
  return m;
}

inline auto make_wip_oracle(const Params& p, FdSteps steps = {}) {
  auto lagrangian = [p](const Vec6& q, const Vec6& v) {
    return lagrangian_full(FullState::from_vectors(q, v), p);
  };
  auto constraint = [p](const Vec6& q) { return wip_constraint_matrix(q, p); };
  return MultiplierOracle<6, 3, decltype(lagrangian), decltype(constraint)>(lagrangian,
                                                                           constraint, steps);
}

using WipOracle = decltype(make_wip_oracle(std::declval<Params>()));

inline Vec6 wheel_forces(const Controls& c) {
  Vec6 f = Vec6::Zero();
  f[4] = c.tau1;
  f[5] = c.tau2;
  return f;
}

/// Admissibility tolerance for the public oracle entry point.
inline constexpr double kAdmissibleTol = 1e-10;

/// Accelerations and multipliers of the constrained full model.
inline WipOracle::Result lagrange_dalembert_rhs(const FullState& s, const Vec6& forces,
                                                const Params& p, FdSteps steps = {}) {
  const Vec6 q = s.q(), v = s.qdot();
  const double violation = (wip_constraint_matrix(q, p) * v).cwiseAbs().maxCoeff();
  if (!(violation <= kAdmissibleTol)) {
    throw InadmissibleVelocity("velocity violates the rolling constraints by " +
                               std::to_string(violation));
  }
  return make_wip_oracle(p, steps).solve(q, v, forces);
}

}  // namespace wip

#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wip/dynamics_full.hpp"
#include "wip/dynamics_reduced.hpp"
#include "wip/integrator.hpp"
#include "wip/lagrangian.hpp"
#include "wip/oracle.hpp"
#include "wip/params.hpp"
#include "wip/state.hpp"

namespace wip {

enum class Model { Full, Reduced, Oracle };

inline const char* to_string(Model m) {
  switch (m) {
    case Model::Full: return "full";
    case Model::Reduced: return "reduced";
    case Model::Oracle: return "oracle";
  }
  return "?";
}

/// Piecewise-constant wheel torques. Segment i is active on [t_i, t_{i+1});
/// torques are zero before the first segment and the last one never ends.
class TorqueProfile {
 public:
  struct Segment {
    double t_start;
    Controls tau;
  };

  TorqueProfile() = default;

  explicit TorqueProfile(std::vector<Segment> segments) : segments_(std::move(segments)) {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const Segment& s = segments_[i];
      if (!std::isfinite(s.t_start) || !std::isfinite(s.tau.tau1) ||
          !std::isfinite(s.tau.tau2)) {
        throw std::invalid_argument("torque segment " + std::to_string(i) + " is not finite");
      }
      if (i > 0 && !(s.t_start > segments_[i - 1].t_start)) {
        throw std::invalid_argument("torque segment times must be strictly increasing");
      }
    }
  }

  /// A single constant pulse on [t0, t1), given in momentum-equation inputs.
  static TorqueProfile pulse(double t0, double t1, const MomentumInputs& u, const Params& p) {
    return TorqueProfile({{t0, tau_from_u(u, p)}, {t1, Controls{}}});
  }

  Controls at(double t) const {
    Controls c{};
    for (const Segment& s : segments_) {
      if (s.t_start <= t) c = s.tau;
      else break;
    }
    return c;
  }

  /// True when a segment boundary lies in (t0, t1].
  bool switches_within(double t0, double t1) const {
    for (const Segment& s : segments_) {
      if (s.t_start > t0 && s.t_start <= t1) return true;
    }
    return false;
  }

  const std::vector<Segment>& segments() const { return segments_; }

 private:
  std::vector<Segment> segments_;
};

struct Diagnostics {
  double energy = 0;
  double p1 = 0, p2 = 0;
  std::array<double, 3> residual{};  // rolling-constraint residuals (x, y, theta)
};

struct Sample {
  double t = 0;
  FullState full;
  ReducedState reduced;
  Diagnostics diag;
};

/// Uniformly sampled simulation output; both state representations are kept
/// for every sample.
struct Trajectory {
  Model model = Model::Full;
  double dt = 0;
  HolonomicAnchor anchor;
  std::vector<Sample> samples;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, double t)
      : std::runtime_error(what + " (t=" + std::to_string(t) + ")"), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

using InitialState = std::variant<FullState, ReducedState>;

/// floor(T/dt) + 1, tolerant of T/dt landing a hair below an integer.
inline long sample_count(double duration, double dt) {
  return static_cast<long>(std::floor(duration / dt + 1e-9)) + 1;
}

namespace detail {

using FullVec = Eigen::Matrix<double, 9, 1>;
using OracleVec = Eigen::Matrix<double, 12, 1>;
using ReducedVec = Eigen::Matrix<double, 8, 1>;

inline FullVec pack(const FullState& s) {
  FullVec y;
  y << s.x, s.y, s.theta, s.alpha, s.phi1, s.phi2, s.alpha_dot, s.phi1_dot, s.phi2_dot;
  return y;
}

inline FullState unpack_full(const FullVec& y, const Params& p) {
  return admissible_state(y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], y[8], p);
}

inline ReducedVec pack(const ReducedState& s) {
  ReducedVec y;
  y << s.x, s.y, s.theta, s.phi, s.alpha, s.alpha_dot, s.p1, s.p2;
  return y;
}

inline ReducedState unpack_reduced(const ReducedVec& y) {
  return {y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7]};
}

inline Diagnostics diagnose(const FullState& s, const Params& p) {
  Diagnostics d;
  d.energy = total_energy(s, p);
  std::tie(d.p1, d.p2) = momenta_from_full(s, p);
  d.residual = constraint_residual(s, p);
  return d;
}

inline FullVec full_derivative(const FullVec& y, const Controls& c, const Params& p) {
  const FullState s = unpack_full(y, p);
  const FullRhs rhs = full_rhs(s, c, p);
  FullVec dy;
  dy << rhs.group_rate, y.tail<3>(), rhs.base_accel;
  return dy;
}

inline ReducedVec reduced_derivative(const ReducedVec& y, const MomentumInputs& u,
                                     const Params& p) {
  const ReducedRhs rhs = reduced_rhs(unpack_reduced(y), u, p);
  ReducedVec dy;
  dy << rhs.x_dot, rhs.y_dot, rhs.theta_dot, rhs.phi_dot, y[5], rhs.alpha_ddot, rhs.p1_dot,
      rhs.p2_dot;
  return dy;
}

}  // namespace detail

/// Integrates the chosen model with fixed-step RK4. Torques are held over
/// each step at their value at the step start.
inline Trajectory simulate(Model model, const InitialState& initial, const TorqueProfile& profile,
                           double duration, double dt, const Params& p) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must be non-negative");
  }

  // Both representations of the initial condition, plus the wheel anchor.
  FullState full0;
  ReducedState reduced0;
  HolonomicAnchor anchor;
  if (const auto* f = std::get_if<FullState>(&initial)) {
    full0 = *f;
    anchor = HolonomicAnchor::from(full0);
    reduced0 = full_to_reduced(full0, p);
  } else {
    reduced0 = std::get<ReducedState>(initial);
    anchor = {reduced0.theta, reduced0.phi, reduced0.phi};
    full0 = reduced_to_full(reduced0, anchor, p);
  }
  if (!full0.finite() || !reduced0.finite()) {
    throw std::invalid_argument("initial state is not finite");
  }

  Trajectory traj;
  traj.model = model;
  traj.dt = dt;
  traj.anchor = anchor;
  const long n = sample_count(duration, dt);
  traj.samples.reserve(static_cast<std::size_t>(n));

  auto record = [&](double t, const FullState& f, const ReducedState& r) {
    traj.samples.push_back({t, f, r, detail::diagnose(f, p)});
  };

  auto guarded = [](double t, auto&& step) {
    try {
      return step();
    } catch (const std::exception& e) {
      throw SimulationError(e.what(), t);
    }
  };

  switch (model) {
    case Model::Full: {
      detail::FullVec y = detail::pack(full0);
      record(0.0, full0, reduced0);
      for (long k = 1; k < n; ++k) {
        const double t = static_cast<double>(k - 1) * dt;
        const Controls c = profile.at(t);
        y = guarded(t, [&] {
          return rk4_step([&](double, const detail::FullVec& z) {
                            return detail::full_derivative(z, c, p);
                          }, y, t, dt);
        });
        const FullState s = detail::unpack_full(y, p);
        record(static_cast<double>(k) * dt, s, full_to_reduced(s, p));
      }
      break;
    }
    case Model::Reduced: {
      detail::ReducedVec y = detail::pack(reduced0);
      record(0.0, full0, reduced0);
      for (long k = 1; k < n; ++k) {
        const double t = static_cast<double>(k - 1) * dt;
        const MomentumInputs u = u_from_tau(profile.at(t), p);
        y = guarded(t, [&] {
          return rk4_step([&](double, const detail::ReducedVec& z) {
                            return detail::reduced_derivative(z, u, p);
                          }, y, t, dt);
        });
        const ReducedState s = detail::unpack_reduced(y);
        record(static_cast<double>(k) * dt, reduced_to_full(s, anchor, p), s);
      }
      break;
    }
    case Model::Oracle: {
      const auto oracle = make_wip_oracle(p);
      detail::OracleVec y;
      y << full0.q(), full0.qdot();
      record(0.0, full0, reduced0);
      for (long k = 1; k < n; ++k) {
        const double t = static_cast<double>(k - 1) * dt;
        const Vec6 forces = wheel_forces(profile.at(t));
        y = guarded(t, [&] {
          return rk4_step([&](double, const detail::OracleVec& z) {
                            const Vec6 q = z.head<6>(), v = z.tail<6>();
                            detail::OracleVec dz;
                            dz << v, oracle.solve(q, v, forces).accel;
                            return dz;
                          }, y, t, dt);
        });
        const FullState s = FullState::from_vectors(y.head<6>(), y.tail<6>());
        record(static_cast<double>(k) * dt, s, full_to_reduced(s, p));
      }
      break;
    }
  }
  return traj;
}

}  // namespace wip

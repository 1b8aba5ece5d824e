#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wip/connection.hpp"
#include "wip/dynamics_full.hpp"
#include "wip/dynamics_reduced.hpp"
#include "wip/lagrangian.hpp"
#include "wip/oracle.hpp"
#include "wip/params.hpp"
#include "wip/sim.hpp"
#include "wip/state.hpp"

namespace wip {

// ---------------------------------------------------------------------------
// Per-sample structural quantities
// ---------------------------------------------------------------------------

inline std::vector<std::array<double, 3>> constraint_residuals(const Trajectory& traj,
                                                               const Params& p) {
  std::vector<std::array<double, 3>> out;
  out.reserve(traj.samples.size());
  for (const Sample& s : traj.samples) out.push_back(constraint_residual(s.full, p));
  return out;
}

inline double max_constraint_residual(const Trajectory& traj, const Params& p) {
  double worst = 0.0;
  for (const auto& r : constraint_residuals(traj, p)) {
    worst = std::max({worst, r[0], r[1], r[2]});
  }
  return worst;
}

/// Full state expressed in (x, y, theta, alpha, phi) with phi the mean wheel angle.
inline MeanWheelState to_mean_wheel(const FullState& s) {
  return {s.x,     s.y,     s.theta,     s.alpha,     0.5 * (s.phi1 + s.phi2),
          s.x_dot, s.y_dot, s.theta_dot, s.alpha_dot, 0.5 * (s.phi1_dot + s.phi2_dot)};
}

/// <dL/dq_dot, (xi_i)_Q(q)> with dL/dq_dot from central differences of the
/// Lagrangian in mean-wheel coordinates. Section 1 is the rolling generator
/// (r cos theta, r sin theta, 0, 0, 1), section 2 the yaw generator d/dtheta.
inline double momentum_pairing(const FullState& s, int section, const Params& p) {
  if (section != 1 && section != 2) throw std::invalid_argument("section must be 1 or 2");
  const MeanWheelState base = to_mean_wheel(s);
  std::array<double, 5> generator{};
  if (section == 1) {
    generator = {p.r * std::cos(s.theta), p.r * std::sin(s.theta), 0.0, 0.0, 1.0};
  } else {
    generator = {0.0, 0.0, 1.0, 0.0, 0.0};
  }
  // velocity slots in MeanWheelState order: x_dot, y_dot, theta_dot, alpha_dot, phi_dot
  auto slot = [](MeanWheelState& c, int i) -> double& {
    switch (i) {
      case 0: return c.x_dot;
      case 1: return c.y_dot;
      case 2: return c.theta_dot;
      case 3: return c.alpha_dot;
      default: return c.phi_dot;
    }
  };
  double vmax = 1.0;
  for (int i = 0; i < 5; ++i) vmax = std::max(vmax, std::abs(slot(const_cast<MeanWheelState&>(base), i)));
  const double step = vmax;  // L is quadratic in velocities
  double pairing = 0.0;
  for (int i = 0; i < 5; ++i) {
    if (generator[i] == 0.0) continue;
    MeanWheelState plus = base, minus = base;
    slot(plus, i) += step;
    slot(minus, i) -= step;
    pairing += generator[i] * (lagrangian_mean_wheel(plus, p) - lagrangian_mean_wheel(minus, p)) /
               (2.0 * step);
  }
  return pairing;
}

/// Central-difference evaluation of the curvature formula applied to
/// ehresmann_at; r-derivatives are taken too and vanish.
inline Curvature curvature_fd(double theta, const Params& p, double step = 1e-5) {
  const EhresmannCoeffs a = ehresmann_at(theta, p);
  const EhresmannCoeffs da =
      (ehresmann_at(theta + step, p) - ehresmann_at(theta - step, p)) / (2.0 * step);
  Curvature out;
  for (int b = 0; b < 3; ++b) {
    for (int beta = 0; beta < 3; ++beta) {
      for (int gamma = 0; gamma < 3; ++gamma) {
        // connection has no r-dependence: dA/dr differences are identically zero
        const double dr_terms = 0.0;
        out[b](beta, gamma) =
            dr_terms + a(kTheta, beta) * da(b, gamma) - a(kTheta, gamma) * da(b, beta);
      }
    }
  }
  return out;
}

inline double curvature_norm(const Curvature& c) {
  double sq = 0.0;
  for (const auto& m : c) sq += m.squaredNorm();
  return std::sqrt(sq);
}

/// dA(alpha_dot, beta) for the one-dimensional shape space, by central differences
/// of the connection's d(alpha) coefficient. Vanishes identically.
inline Eigen::Vector4d connection_exterior_derivative(double alpha, double alpha_dot,
                                                      double beta, const Params& p,
                                                      double step = 1e-6) {
  auto form = [&](double a) { return nonholo_connection(a, p).shape_form; };
  const Eigen::Vector4d d_form = (form(alpha + step) - form(alpha - step)) / (2.0 * step);
  return d_form * alpha_dot * beta - d_form * beta * alpha_dot;
}

// ---------------------------------------------------------------------------
// Trajectory comparison
// ---------------------------------------------------------------------------

inline constexpr std::array<const char*, 8> kComparedVariables = {
    "x", "y", "theta", "alpha", "phi", "alpha_dot", "p1", "p2"};

inline std::array<double, 8> observables(const ReducedState& s) {
  return {s.x, s.y, s.theta, s.alpha, s.phi, s.alpha_dot, s.p1, s.p2};
}

struct VariableError {
  std::string name;
  double max_abs = 0;
  double rms = 0;
};

struct ComparisonReport {
  std::string label;
  std::vector<VariableError> variables;

  double max_over(std::initializer_list<std::string_view> names) const {
    double worst = 0.0;
    for (const auto& v : variables) {
      if (std::find(names.begin(), names.end(), v.name) != names.end()) {
        worst = std::max(worst, v.max_abs);
      }
    }
    return worst;
  }

  double max_abs() const {
    double worst = 0.0;
    for (const auto& v : variables) worst = std::max(worst, v.max_abs);
    return worst;
  }
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Max and RMS differences in the shared reduced observables.
inline ComparisonReport compare_trajectories(const Trajectory& a, const Trajectory& b,
                                             std::string label = {}) {
  if (a.samples.size() != b.samples.size() || a.dt != b.dt) {
    throw GridMismatch("trajectories are sampled on different grids");
  }
  std::array<double, 8> worst{}, sq{};
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    if (a.samples[k].t != b.samples[k].t) throw GridMismatch("sample times differ");
    const auto va = observables(a.samples[k].reduced);
    const auto vb = observables(b.samples[k].reduced);
    for (std::size_t i = 0; i < va.size(); ++i) {
      const double e = std::abs(va[i] - vb[i]);
      worst[i] = std::max(worst[i], e);
      sq[i] += e * e;
    }
  }
  ComparisonReport report{std::move(label), {}};
  const double n = std::max<double>(1.0, static_cast<double>(a.samples.size()));
  for (std::size_t i = 0; i < worst.size(); ++i) {
    report.variables.push_back({kComparedVariables[i], worst[i], std::sqrt(sq[i] / n)});
  }
  return report;
}

struct EnergyDrift {
  double max_abs = 0;
  double relative = 0;
};

inline EnergyDrift energy_drift(const Trajectory& traj) {
  if (traj.samples.empty()) return {};
  const double e0 = traj.samples.front().diag.energy;
  double worst = 0.0;
  for (const Sample& s : traj.samples) worst = std::max(worst, std::abs(s.diag.energy - e0));
  return {worst, e0 != 0.0 ? worst / std::abs(e0) : worst};
}

/// Max over samples of |theta - theta0 - (r/d)((phi2 - phi2_0) - (phi1 - phi1_0))|.
inline double holonomic_violation(const Trajectory& traj, const Params& p) {
  if (traj.samples.empty()) return 0.0;
  const FullState& s0 = traj.samples.front().full;
  double worst = 0.0;
  for (const Sample& s : traj.samples) {
    const double lhs = s.full.theta - s0.theta;
    const double rhs = p.r / p.d * ((s.full.phi2 - s0.phi2) - (s.full.phi1 - s0.phi1));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

struct MomentumRateError {
  double p1 = 0, p2 = 0;
  std::size_t samples_checked = 0;
};

/// Central-difference rate of the paired momenta along a full trajectory
/// against the closed-form momentum equations. Samples whose difference
/// window straddles a torque switch are skipped.
inline MomentumRateError momentum_rate_error(const Trajectory& traj, const TorqueProfile& profile,
                                             const Params& p) {
  MomentumRateError err;
  const auto& smp = traj.samples;
  if (smp.size() < 3) return err;
  std::vector<double> m1(smp.size()), m2(smp.size());
  for (std::size_t k = 0; k < smp.size(); ++k) {
    m1[k] = momentum_pairing(smp[k].full, 1, p);
    m2[k] = momentum_pairing(smp[k].full, 2, p);
  }
  for (std::size_t k = 1; k + 1 < smp.size(); ++k) {
    const double t_prev = smp[k - 1].t, t_next = smp[k + 1].t;
    if (profile.switches_within(t_prev, t_next)) continue;
    const double width = t_next - t_prev;
    const FullState& s = smp[k].full;
    const MomentumInputs u = u_from_tau(profile.at(smp[k].t), p);
    const auto [r1, r2] = momentum_rhs(s.alpha, s.alpha_dot, m1[k], m2[k], u, p);
    err.p1 = std::max(err.p1, std::abs((m1[k + 1] - m1[k - 1]) / width - r1));
    err.p2 = std::max(err.p2, std::abs((m2[k + 1] - m2[k - 1]) / width - r2));
    ++err.samples_checked;
  }
  return err;
}

/// Max pointwise deviation between act(g, traj) and a trajectory simulated
/// from the shifted initial state, over positions, angles and momenta.
inline double equivariance_error(const Trajectory& original, const Trajectory& shifted,
                                 const GroupShift& g) {
  if (original.samples.size() != shifted.samples.size()) {
    throw GridMismatch("trajectories are sampled on different grids");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < original.samples.size(); ++k) {
    const auto expected = observables(act(g, original.samples[k].reduced));
    const auto got = observables(shifted.samples[k].reduced);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      worst = std::max(worst, std::abs(expected[i] - got[i]));
    }
  }
  return worst;
}

/// Max deviation of |position - centre| from the turning radius implied by
/// the initial body velocity (xi1 / xi3).
inline double circle_deviation(const Trajectory& traj, const Params& p) {
  const ReducedState& s0 = traj.samples.front().reduced;
  const BodyVelocity xi = body_velocity_from_momenta(s0.alpha, s0.alpha_dot, s0.p1, s0.p2, p);
  const double radius = xi[0] / xi[2];
  const double cx = s0.x - radius * std::sin(s0.theta);
  const double cy = s0.y + radius * std::cos(s0.theta);
  double worst = 0.0;
  for (const Sample& s : traj.samples) {
    const double dist = std::hypot(s.reduced.x - cx, s.reduced.y - cy);
    worst = std::max(worst, std::abs(dist - std::abs(radius)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Random admissible states
// ---------------------------------------------------------------------------

/// Admissible full states with unit-order velocities and tilts within +-1.4 rad.
class StateSampler {
 public:
  explicit StateSampler(const Params& p, std::uint64_t seed = 20240901) : p_(p), rng_(seed) {}

  FullState next() {
    return admissible_state(uni(-2, 2), uni(-2, 2), uni(-std::numbers::pi, std::numbers::pi),
                            uni(-1.4, 1.4), uni(-5, 5), uni(-5, 5), uni(-1, 1), uni(-1, 1),
                            uni(-1, 1), p_);
  }

  Controls controls() { return {uni(-1, 1), uni(-1, 1)}; }

  GroupShift shift() {
    return {uni(-3, 3), uni(-3, 3), uni(-std::numbers::pi, std::numbers::pi), uni(-3, 3)};
  }

  double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  Params p_;
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Check predicates
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool passed = false;
};

inline CheckResult make_check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, std::isfinite(value) && value <= tolerance};
}

inline CheckResult check_curvature_fd(const Params& p, int samples = 50, double tol = 1e-7) {
  StateSampler rng(p, 11);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double theta = rng.uni(-std::numbers::pi, std::numbers::pi);
    const Curvature closed = curvature_at(theta, p);
    const Curvature fd = curvature_fd(theta, p);
    double diff = 0.0;
    for (int b = 0; b < 3; ++b) diff += (closed[b] - fd[b]).squaredNorm();
    worst = std::max(worst, std::sqrt(diff) / curvature_norm(closed));
  }
  return make_check("curvature closed form vs finite differences (relative)", worst, tol);
}

inline CheckResult check_momentum_pairing(const Params& p, int samples = 100, double tol = 1e-7) {
  StateSampler rng(p, 12);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const FullState s = rng.next();
    const auto [p1, p2] = momenta_from_full(s, p);
    worst = std::max({worst, std::abs(momentum_pairing(s, 1, p) - p1),
                      std::abs(momentum_pairing(s, 2, p) - p2)});
  }
  return make_check("momentum pairing vs closed form (abs)", worst, tol);
}

inline CheckResult check_oracle_agreement(const Params& p, int samples = 100, double tol = 1e-6) {
  StateSampler rng(p, 13);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const FullState s = rng.next();
    const Controls c = rng.controls();
    const Vec6 model = full_accelerations(s, full_rhs(s, c, p), p);
    const Vec6 oracle = lagrange_dalembert_rhs(s, wheel_forces(c), p).accel;
    worst = std::max(worst, (model - oracle).norm() / oracle.norm());
  }
  return make_check("full model vs multiplier oracle accelerations (relative)", worst, tol);
}

inline CheckResult check_connection_closed(const Params& p, int samples = 50, double tol = 1e-12) {
  StateSampler rng(p, 14);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Eigen::Vector4d d = connection_exterior_derivative(rng.uni(-1.5, 1.5), rng.uni(-2, 2),
                                                             rng.uni(-2, 2), p);
    worst = std::max(worst, d.cwiseAbs().maxCoeff());
  }
  return make_check("exterior derivative of the nonholonomic connection", worst, tol);
}

/// Reference forced scenario: tilted start with rolling and yaw momentum and a
/// one-second torque pulse.
struct Scenario {
  InitialState initial;
  TorqueProfile profile;
  double duration = 5.0;
  double dt = 1e-3;
};

inline Scenario reference_scenario(const Params& p) {
  const ReducedState s0{0, 0, 0, 0, 0.15, 0.0, 0.3 * h_const(p), 0.1 * f_of_alpha(0.0, p)};
  return {s0, TorqueProfile::pulse(1.0, 2.0, {0.2, 0.05}, p), 5.0, 1e-3};
}

inline Scenario falling_scenario() {
  return {ReducedState{0, 0, 0, 0, 0.2, 0, 0, 0}, TorqueProfile{}, 5.0, 1e-4};
}

inline CheckResult check_energy_drift(const Params& p, double tol = 1e-8) {
  const Scenario sc = falling_scenario();
  const Trajectory traj = simulate(Model::Full, sc.initial, sc.profile, sc.duration, sc.dt, p);
  return make_check("energy drift, zero torque (relative)", energy_drift(traj).relative, tol);
}

inline CheckResult check_momentum_rate(const Params& p, double tol = 1e-4) {
  const Scenario sc = reference_scenario(p);
  const Trajectory traj = simulate(Model::Full, sc.initial, sc.profile, sc.duration, 1e-4, p);
  const MomentumRateError e = momentum_rate_error(traj, sc.profile, p);
  return make_check("momentum equations vs differentiated momenta (abs)", std::max(e.p1, e.p2),
                    tol);
}

inline CheckResult check_holonomic(const Params& p, double tol = 1e-12) {
  const Scenario sc = reference_scenario(p);
  const Trajectory traj = simulate(Model::Full, sc.initial, sc.profile, sc.duration, sc.dt, p);
  return make_check("holonomic heading relation along full trajectory", holonomic_violation(traj, p),
                    tol);
}

inline CheckResult check_equivariance(const Params& p, int shifts = 20, double tol = 1e-9) {
  const Scenario sc = reference_scenario(p);
  StateSampler rng(p, 15);
  double worst = 0.0;
  for (Model m : {Model::Full, Model::Reduced}) {
    const Trajectory base = simulate(m, sc.initial, sc.profile, sc.duration, sc.dt, p);
    const ReducedState r0 = std::get<ReducedState>(sc.initial);
    for (int i = 0; i < shifts; ++i) {
      const GroupShift g = rng.shift();
      const Trajectory moved = simulate(m, act(g, r0), sc.profile, sc.duration, sc.dt, p);
      worst = std::max(worst, equivariance_error(base, moved, g));
    }
  }
  return make_check("SE(2) x S^1 equivariance of both models", worst, tol);
}

inline CheckResult check_model_equivalence(const Params& p, double tol = 1e-5) {
  const Scenario sc = reference_scenario(p);
  const Trajectory full = simulate(Model::Full, sc.initial, sc.profile, sc.duration, sc.dt, p);
  const Trajectory red = simulate(Model::Reduced, sc.initial, sc.profile, sc.duration, sc.dt, p);
  return make_check("full vs reduced model (max abs over x, y, theta, alpha, phi)",
                    compare_trajectories(full, red).max_over({"x", "y", "theta", "alpha", "phi"}),
                    tol);
}

/// Every structural check, in a fixed order.
inline std::vector<CheckResult> structural_suite(const Params& p) {
  return {check_curvature_fd(p),     check_momentum_pairing(p), check_oracle_agreement(p),
          check_connection_closed(p), check_model_equivalence(p), check_equivariance(p),
          check_energy_drift(p),     check_momentum_rate(p),    check_holonomic(p)};
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string render_text(const std::vector<ComparisonReport>& reports) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  for (const auto& r : reports) {
    os << r.label << '\n';
    for (const auto& v : r.variables) {
      os << "  " << std::left << std::setw(10) << v.name << " max " << std::scientific
         << std::setprecision(3) << v.max_abs << "  rms " << v.rms << '\n';
    }
  }
  return os.str();
}

/// One `label.variable.max=value` / `.rms=value` line per entry.
inline std::string render_key_value(const std::vector<ComparisonReport>& reports) {
  std::ostringstream os;
  for (const auto& r : reports) {
    for (const auto& v : r.variables) {
      os << r.label << '.' << v.name << ".max=" << format_number(v.max_abs) << '\n';
      os << r.label << '.' << v.name << ".rms=" << format_number(v.rms) << '\n';
    }
  }
  return os.str();
}

inline std::string render_check(const CheckResult& c) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << (c.passed ? "PASS" : "FAIL") << "  " << c.name << ": " << std::scientific
     << std::setprecision(3) << c.value << " (tol " << c.tolerance << ")";
  return os.str();
}

}  // namespace wip

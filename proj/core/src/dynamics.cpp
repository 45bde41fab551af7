#include "qhj/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dormand_prince.hpp"
#include "qhj/errors.hpp"

namespace qhj {

namespace {

constexpr double kInertThreshold = 1e-12;

std::optional<detail::Stop> singularity_status(const ReducedActionField& action, const Vec3& r,
                                               double eps) {
  if (!action.field().contains(r)) {
    return detail::Stop{Termination::DomainExit, SingularityKind::None, "left solution domain"};
  }
  ActionSample s;
  try {
    s = sample(action, r);
    (void)metric_from_sample(s, action.hbar(), r);
  } catch (const Error& e) {
    const auto kind = e.kind() == ErrorKind::NodalPoint ? SingularityKind::NodalPoint
                                                        : SingularityKind::NodeSingularity;
    return detail::Stop{Termination::SingularityEvent, kind, e.what()};
  }
  if (s.R < eps) {
    return detail::Stop{Termination::SingularityEvent, SingularityKind::NodalPoint,
                        "R fell below singularity_eps"};
  }
  for (std::size_t mu = 0; mu < 3; ++mu) {
    const bool inert = std::fabs(s.grad_S0[mu]) < kInertThreshold &&
                       std::fabs(s.hessian_R_diag[mu] / s.R) < kInertThreshold;
    if (!inert && std::fabs(s.grad_S0[mu]) < eps) {
      return detail::Stop{Termination::SingularityEvent, SingularityKind::NodeSingularity,
                          std::string("|d S0 / d") + "xyz"[mu] + "| fell below singularity_eps"};
    }
  }
  return std::nullopt;
}

// R and the signed d_mu S0 of non-inert axes (NaN for inert ones).
detail::Watch singularity_watch(const ReducedActionField& action, const Vec3& r) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (!action.field().contains(r)) return {std::numeric_limits<double>::infinity(), {nan, nan, nan}};
  const ActionSample s = sample(action, r);
  detail::Watch w{s.R, {}};
  for (std::size_t mu = 0; mu < 3; ++mu) {
    const bool inert = std::fabs(s.grad_S0[mu]) < kInertThreshold &&
                       std::fabs(s.hessian_R_diag[mu] / s.R) < kInertThreshold;
    w.signs[mu] = inert ? nan : s.grad_S0[mu];
  }
  return w;
}

void validate(const IntegratorConfig& c) {
  if (!(c.rel_tol > 0.0) || !(c.abs_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "integrator tolerances must be positive");
  }
  if (!(c.t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be positive");
  if (!(c.max_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "max_step must be positive");
  if (!(c.singularity_eps > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "singularity_eps must be positive");
  }
}

Trajectory stopped_at_start(const detail::Stop& stop, const Vec3& r0) {
  Trajectory traj;
  traj.termination = TerminationRecord{stop.kind, stop.singularity, 0.0, r0, stop.detail};
  return traj;
}

void fill_diagnostics(const ReducedActionField& action, Trajectory& traj) {
  traj.diagnostics.reserve(traj.states.size());
  for (const TrajectoryState& st : traj.states) {
    StateDiagnostics d;
    d.law_residual = law_residual(action, st);
    d.energy_residual = energy_residual(action, st);
    d.grad_S0 = sample(action, st.position).grad_S0;
    traj.max_abs_law_residual = std::max(traj.max_abs_law_residual, std::fabs(d.law_residual));
    traj.max_abs_energy_residual =
        std::max(traj.max_abs_energy_residual, std::fabs(d.energy_residual));
    traj.diagnostics.push_back(d);
  }
}

// Finite-difference spacing for metric gradients on the second-order route.
Vec3 metric_fd_steps(const SolutionField3D& field) {
  Vec3 steps{};
  for (Axis a : kAxes) {
    const Interval& d = field.pair(a).domain();
    const double scale = d.bounded() ? std::max(1.0, d.hi - d.lo) : 1.0;
    steps[index(a)] = 1e-6 * scale;
  }
  return steps;
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::SingularityEvent: return "SingularityEvent";
    case Termination::DomainExit: return "DomainExit";
  }
  return "Unknown";
}

std::string_view to_string(SingularityKind k) {
  switch (k) {
    case SingularityKind::None: return "None";
    case SingularityKind::NodalPoint: return "NodalPoint";
    case SingularityKind::NodeSingularity: return "NodeSingularity";
    case SingularityKind::StepUnderflow: return "StepUnderflow";
  }
  return "Unknown";
}

Vec3 velocity_field(const ReducedActionField& action, const Vec3& r) {
  const ActionSample s = sample(action, r);
  const QuantumMetric m = metric_from_sample(s, action.hbar(), r);
  Vec3 v{};
  for (std::size_t mu = 0; mu < 3; ++mu) v[mu] = m.a_upper[mu] * s.grad_S0[mu] / action.mass();
  return v;
}

Trajectory integrate_first_order(const ReducedActionField& action, const Vec3& r0,
                                 const IntegratorConfig& config) {
  validate(config);
  if (auto stop = singularity_status(action, r0, config.singularity_eps)) {
    return stopped_at_start(*stop, r0);
  }
  using State = detail::OdeState<3>;
  detail::DormandPrince<3> solver(
      [&](const State& y) { return velocity_field(action, y); },
      [&](const State& y) { return singularity_status(action, y, config.singularity_eps); },
      [&](const State& y) { return singularity_watch(action, {y[0], y[1], y[2]}); },
      [](const State& y) { return Vec3{y[0], y[1], y[2]}; }, config);
  const auto sol = solver.run(r0);

  Trajectory traj;
  traj.termination = sol.termination;
  traj.states.reserve(sol.t.size());
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    traj.states.push_back({sol.t[i], sol.y[i], velocity_field(action, sol.y[i])});
  }
  fill_diagnostics(action, traj);
  return traj;
}

Trajectory integrate_second_order(const ReducedActionField& action, const Vec3& r0,
                                  const IntegratorConfig& config, std::optional<Vec3> v0) {
  validate(config);
  if (auto stop = singularity_status(action, r0, config.singularity_eps)) {
    return stopped_at_start(*stop, r0);
  }
  const Vec3 v_init = velocity_field(action, r0);
  if (v0 && max_abs(*v0 - v_init) > 1e-9) {
    throw Error(ErrorKind::InconsistentInitialVelocity,
                "initial velocity must equal the velocity field at r0");
  }

  const Vec3 fd = metric_fd_steps(action.field());
  const double m0 = action.mass();
  using State = detail::OdeState<6>;

  // m a_mu vdot_mu = -m v_mu (v . grad a_mu) + (m/2) sum_nu v_nu^2 d_mu a_nu - d_mu V
  auto rhs = [&](const State& y) {
    const Vec3 r{y[0], y[1], y[2]};
    const Vec3 v{y[3], y[4], y[5]};
    const Vec3 a = metric_at(action, r).a_lower;
    Mat3 grad_a{};  // grad_a[nu][mu] = d_nu a_{mu mu}
    for (Axis ax : kAxes) {
      const std::size_t nu = index(ax);
      const Vec3 e = fd[nu] * unit(ax);
      const Vec3 plus = metric_at(action, r + e).a_lower;
      const Vec3 minus = metric_at(action, r - e).a_lower;
      for (std::size_t mu = 0; mu < 3; ++mu) grad_a[nu][mu] = (plus[mu] - minus[mu]) / (2.0 * fd[nu]);
    }
    const Vec3 grad_V = action.field().potential_gradient(r);
    State dy{};
    for (std::size_t mu = 0; mu < 3; ++mu) {
      double da_dt = 0.0;
      double quad = 0.0;
      for (std::size_t nu = 0; nu < 3; ++nu) {
        da_dt += v[nu] * grad_a[nu][mu];
        quad += v[nu] * v[nu] * grad_a[mu][nu];
      }
      dy[mu] = v[mu];
      dy[3 + mu] = (-m0 * v[mu] * da_dt + 0.5 * m0 * quad - grad_V[mu]) / (m0 * a[mu]);
    }
    return dy;
  };

  detail::DormandPrince<6> solver(
      rhs,
      [&](const State& y) {
        return singularity_status(action, {y[0], y[1], y[2]}, config.singularity_eps);
      },
      [&](const State& y) { return singularity_watch(action, {y[0], y[1], y[2]}); },
      [](const State& y) { return Vec3{y[0], y[1], y[2]}; }, config);
  const auto sol = solver.run({r0[0], r0[1], r0[2], v_init[0], v_init[1], v_init[2]});

  Trajectory traj;
  traj.termination = sol.termination;
  traj.states.reserve(sol.t.size());
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    const State& y = sol.y[i];
    traj.states.push_back({sol.t[i], {y[0], y[1], y[2]}, {y[3], y[4], y[5]}});
  }
  fill_diagnostics(action, traj);
  return traj;
}

double law_residual(const ReducedActionField& action, const TrajectoryState& state) {
  const ActionSample s = sample(action, state.position);
  return dot(state.velocity, s.grad_S0) - 2.0 * (action.energy() - s.V);
}

namespace {

double kinetic(const ReducedActionField& action, const TrajectoryState& state, double& V) {
  const ActionSample s = sample(action, state.position);
  const QuantumMetric m = metric_from_sample(s, action.hbar(), state.position);
  V = s.V;
  double k = 0.0;
  for (std::size_t mu = 0; mu < 3; ++mu) {
    k += m.a_lower[mu] * state.velocity[mu] * state.velocity[mu];
  }
  return 0.5 * action.mass() * k;
}

}  // namespace

double energy_residual(const ReducedActionField& action, const TrajectoryState& state) {
  double V = 0.0;
  const double T = kinetic(action, state, V);
  return T + V - action.energy();
}

double quantum_lagrangian(const ReducedActionField& action, const TrajectoryState& state) {
  double V = 0.0;
  const double T = kinetic(action, state, V);
  return T - V;
}

double reduce_1d_check(const ReducedActionField& action, const Trajectory& trajectory) {
  double worst = 0.0;
  for (const TrajectoryState& st : trajectory.states) {
    const ActionSample s = sample(action, st.position);
    worst = std::max(worst, std::fabs(st.velocity[0] * s.grad_S0[0] - 2.0 * (action.energy() - s.V)));
  }
  return worst;
}

}  // namespace qhj

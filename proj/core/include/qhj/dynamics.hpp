#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qhj/action.hpp"
#include "qhj/metric.hpp"
#include "qhj/vec3.hpp"

namespace qhj {

struct TrajectoryState {
  double t = 0.0;
  Vec3 position{};
  Vec3 velocity{};
};

/// Adaptive Dormand-Prince 5(4) settings.
struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.1;
  double t_end = 1.0;
  /// Event threshold on R and on min_mu |d_mu S0| over non-inert axes.
  double singularity_eps = 1e-10;
  bool operator==(const IntegratorConfig&) const = default;
};

enum class Termination { Completed, SingularityEvent, DomainExit };
enum class SingularityKind { None, NodalPoint, NodeSingularity, StepUnderflow };

std::string_view to_string(Termination t);
std::string_view to_string(SingularityKind k);

struct TerminationRecord {
  Termination kind = Termination::Completed;
  SingularityKind singularity = SingularityKind::None;
  double t = 0.0;
  Vec3 position{};
  std::string detail;
};

struct StateDiagnostics {
  double law_residual = 0.0;
  double energy_residual = 0.0;
  Vec3 grad_S0{};
};

struct Trajectory {
  std::vector<TrajectoryState> states;
  std::vector<StateDiagnostics> diagnostics;  // one per state
  TerminationRecord termination;
  double max_abs_law_residual = 0.0;
  double max_abs_energy_residual = 0.0;
};

/// v^mu = a^{mu mu} d_mu S0 / m0
Vec3 velocity_field(const ReducedActionField& action, const Vec3& r);

/// Integrates dr/dt = velocity_field(r). Stops at t_end, on leaving the
/// solution domain, or at a located singularity event.
Trajectory integrate_first_order(const ReducedActionField& action, const Vec3& r0,
                                 const IntegratorConfig& config);

/// Integrates the Euler-Lagrange equations of
///   L = (m0/2) sum_mu a_{mu mu} v_mu^2 - V
/// as a six-dimensional first-order system. The initial velocity is
/// velocity_field(r0); a supplied v0 must match it to 1e-9 or
/// InconsistentInitialVelocity is thrown.
Trajectory integrate_second_order(const ReducedActionField& action, const Vec3& r0,
                                  const IntegratorConfig& config,
                                  std::optional<Vec3> v0 = std::nullopt);

/// v . grad S0 - 2 (E - V)
double law_residual(const ReducedActionField& action, const TrajectoryState& state);

/// (m0/2) sum_mu a_{mu mu} v_mu^2 + V - E
double energy_residual(const ReducedActionField& action, const TrajectoryState& state);

/// (m0/2) sum_mu a_{mu mu} v_mu^2 - V
double quantum_lagrangian(const ReducedActionField& action, const TrajectoryState& state);

/// max over states of |xdot d_x S0 - 2 (E - V)| for a field along x only.
double reduce_1d_check(const ReducedActionField& action, const Trajectory& trajectory);

}  // namespace qhj

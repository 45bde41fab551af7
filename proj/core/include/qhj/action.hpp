#pragma once

#include "qhj/schrodinger.hpp"
#include "qhj/vec3.hpp"

namespace qhj {

/// S0 = hbar * arctan(theta' / phi) and R = sqrt(theta'^2 + phi^2) with
/// theta' = a * theta + b * phi. The continuity constant k is fixed to
/// hbar * a, which makes the prefactor of R equal to one.
class ReducedActionField {
 public:
  ReducedActionField(SolutionField3D field, double a, double b);

  const SolutionField3D& field() const noexcept { return field_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double hbar() const noexcept { return field_.physics().hbar; }
  double mass() const noexcept { return field_.physics().mass; }
  double energy() const noexcept { return field_.energy(); }
  double k() const noexcept { return hbar() * a_; }

 private:
  SolutionField3D field_;
  double a_;
  double b_;
};

struct ActionSample {
  double S0_principal = 0.0;  // in (-pi hbar / 2, pi hbar / 2]
  Vec3 grad_S0{};
  double R = 0.0;
  Vec3 hessian_R_diag{};
  double V = 0.0;
  /// (theta' d_mu^2 theta' + phi d_mu^2 phi) / R^2, so that
  /// (d_mu^2 R) / R = (d_mu S0 / hbar)^2 + wave_curvature[mu].
  Vec3 wave_curvature{};
};

/// Throws NodalPoint when R < 1e-12 * max(|theta'|, |phi|, 1).
ActionSample sample(const ReducedActionField& action, const Vec3& r);

/// (grad S0)^2 / 2m - (hbar^2 / 2m) (lap R) / R + V - E
double qshje_residual(const ReducedActionField& action, const Vec3& r);

/// max_mu |R^2 d_mu S0 - hbar a (phi d_mu theta - theta d_mu phi)|
double continuity_identity_residual(const ReducedActionField& action, const Vec3& r);

/// |div(R^2 grad S0)| by central differences.
double continuity_divergence_residual(const ReducedActionField& action, const Vec3& r,
                                      double step = 1e-5);

/// S0', S0'', S0''' along one axis.
struct ActionDerivatives1D {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Closed-form derivatives of S0 along x at (x, 0, 0). Requires a field
/// that varies along x only.
ActionDerivatives1D action_derivatives_1d(const ReducedActionField& action, double x);

/// Floyd's one-dimensional equation,
///   S0'^2/2m - (hbar^2/4m)[(3/2)(S0''/S0')^2 - S0'''/S0'] + V - E.
double floyd_residual_1d(const ReducedActionField& action, double x);

}  // namespace qhj

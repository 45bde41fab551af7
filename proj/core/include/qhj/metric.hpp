#pragma once

#include <array>

#include "qhj/action.hpp"
#include "qhj/vec3.hpp"

namespace qhj {

/// Diagonal quantum metric at a point. Off-diagonal components vanish and
/// are not stored.
struct QuantumMetric {
  Vec3 point{};
  Vec3 a_upper{1.0, 1.0, 1.0};
  Vec3 a_lower{1.0, 1.0, 1.0};
  std::array<int, 3> signature{1, 1, 1};
};

/// entries[mu][nu] = d x^mu / d xhat^nu
struct JacobianMatrix {
  Mat3 entries{};
};

/// a^{mu mu} = 1 - hbar^2 (d_mu S0)^-2 (d_mu^2 R) / R.
///
/// An axis along which both d_mu S0 and d_mu^2 R vanish carries no quantum
/// correction and gets a^{mu mu} = 1. Throws NodeSingularity when only
/// d_mu S0 vanishes.
QuantumMetric metric_at(const ReducedActionField& action, const Vec3& r);
QuantumMetric metric_from_sample(const ActionSample& s, double hbar, const Vec3& r);

/// Positive diagonal square root of the metric; one member of the rotation
/// family J * Q. Throws NonRiemannianPoint if some a^{mu mu} <= 0.
JacobianMatrix canonical_jacobian(const QuantumMetric& metric);

/// Absolute residuals of the twelve transformation equations, in order:
///   [0..2]  sum_nu J[mu][nu]^2 - a^{mu mu}
///   [3..5]  sum_nu J[mu][nu] J[la][nu] for (mu,la) = (x,y), (x,z), (y,z)
///   [6..8]  sum_mu J[mu][nu]^2 a_{mu mu} - 1
///   [9..11] sum_mu J[mu][nu] J[mu][sg] a_{mu mu} for (nu,sg) = (x,y), (x,z), (y,z)
std::array<double, 12> verify_transformation(const JacobianMatrix& jacobian,
                                             const QuantumMetric& metric);

struct SchwarzianInput {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// {S0, x} = S0'''/S0' - (3/2)(S0''/S0')^2
double schwarzian_1d(const SchwarzianInput& s);

/// (dx/dxhat)^2 = 2 m0 (E - V) / S0'^2 for a field along x only.
double fm_factor_1d(const ReducedActionField& action, double x);

/// The same factor through three independent routes.
struct FmFactorForms {
  double energy_form = 0.0;      // 2 m0 (E - V) / S0'^2
  double schwarzian_form = 0.0;  // 1 + (hbar^2 / 2) S0'^-2 {S0, x}
  double metric_form = 0.0;      // a^{xx} from metric_at
};

FmFactorForms fm_factor_forms(const ReducedActionField& action, double x);

}  // namespace qhj

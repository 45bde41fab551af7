#include "qhj/metric.hpp"

#include <cmath>
#include <string>

#include "qhj/errors.hpp"

namespace qhj {

namespace {

constexpr double kMomentumThreshold = 1e-12;
constexpr double kTurningPointThreshold = 1e-14;

constexpr std::array<std::array<std::size_t, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

QuantumMetric metric_from_sample(const ActionSample& s, double hbar, const Vec3& r) {
  QuantumMetric m;
  m.point = r;
  for (std::size_t mu = 0; mu < 3; ++mu) {
    const double p = s.grad_S0[mu];
    const double curvature = s.hessian_R_diag[mu] / s.R;
    if (std::fabs(p) < kMomentumThreshold) {
      if (std::fabs(curvature) < kMomentumThreshold) {
        m.a_upper[mu] = 1.0;
      } else {
        throw Error(ErrorKind::NodeSingularity,
                    std::string("d S0 / d") + "xyz"[mu] + " vanishes where R is curved");
      }
    } else {
      // 1 - hbar^2 (R''/R) / p^2 with R''/R = (p/hbar)^2 + wave_curvature,
      // evaluated without the leading cancellation.
      m.a_upper[mu] = -hbar * hbar * s.wave_curvature[mu] / (p * p);
    }
    m.a_lower[mu] = 1.0 / m.a_upper[mu];
    m.signature[mu] = sign_of(m.a_upper[mu]);
  }
  return m;
}

QuantumMetric metric_at(const ReducedActionField& action, const Vec3& r) {
  return metric_from_sample(sample(action, r), action.hbar(), r);
}

JacobianMatrix canonical_jacobian(const QuantumMetric& metric) {
  for (double a : metric.a_upper) {
    if (!(a > 0.0)) throw NonRiemannianPoint(metric.signature);
  }
  JacobianMatrix j;
  for (std::size_t mu = 0; mu < 3; ++mu) j.entries[mu][mu] = std::sqrt(metric.a_upper[mu]);
  return j;
}

std::array<double, 12> verify_transformation(const JacobianMatrix& jacobian,
                                             const QuantumMetric& metric) {
  const Mat3& J = jacobian.entries;
  std::array<double, 12> res{};
  for (std::size_t mu = 0; mu < 3; ++mu) {
    double row = 0.0;
    for (std::size_t nu = 0; nu < 3; ++nu) row += J[mu][nu] * J[mu][nu];
    res[mu] = std::fabs(row - metric.a_upper[mu]);
  }
  for (std::size_t p = 0; p < 3; ++p) {
    const auto [mu, la] = kPairs[p];
    double s = 0.0;
    for (std::size_t nu = 0; nu < 3; ++nu) s += J[mu][nu] * J[la][nu];
    res[3 + p] = std::fabs(s);
  }
  for (std::size_t nu = 0; nu < 3; ++nu) {
    double col = 0.0;
    for (std::size_t mu = 0; mu < 3; ++mu) col += J[mu][nu] * J[mu][nu] * metric.a_lower[mu];
    res[6 + nu] = std::fabs(col - 1.0);
  }
  for (std::size_t p = 0; p < 3; ++p) {
    const auto [nu, sg] = kPairs[p];
    double s = 0.0;
    for (std::size_t mu = 0; mu < 3; ++mu) s += J[mu][nu] * J[mu][sg] * metric.a_lower[mu];
    res[9 + p] = std::fabs(s);
  }
  return res;
}

double schwarzian_1d(const SchwarzianInput& s) {
  if (!(std::fabs(s.d1) >= kMomentumThreshold)) {
    throw Error(ErrorKind::ZeroConjugateMomentum, "Schwarzian needs S0' != 0");
  }
  const double r2 = s.d2 / s.d1;
  return s.d3 / s.d1 - 1.5 * r2 * r2;
}

double fm_factor_1d(const ReducedActionField& action, double x) {
  const ActionDerivatives1D d = action_derivatives_1d(action, x);
  if (!(std::fabs(d.d1) >= kMomentumThreshold)) {
    throw Error(ErrorKind::ZeroConjugateMomentum, "S0' vanishes at x = " + std::to_string(x));
  }
  const double kinetic = action.energy() - action.field().potential({x, 0.0, 0.0});
  if (std::fabs(kinetic) < kTurningPointThreshold) {
    throw Error(ErrorKind::ClassicalTurningPoint, "E = V at x = " + std::to_string(x));
  }
  return 2.0 * action.mass() * kinetic / (d.d1 * d.d1);
}

FmFactorForms fm_factor_forms(const ReducedActionField& action, double x) {
  const ActionDerivatives1D d = action_derivatives_1d(action, x);
  FmFactorForms out;
  out.energy_form = fm_factor_1d(action, x);
  const double hbar = action.hbar();
  out.schwarzian_form =
      1.0 + 0.5 * hbar * hbar / (d.d1 * d.d1) * schwarzian_1d({d.d1, d.d2, d.d3});
  out.metric_form = metric_at(action, {x, 0.0, 0.0}).a_upper[0];
  return out;
}

}  // namespace qhj

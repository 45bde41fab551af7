#include "qhj/action.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qhj/errors.hpp"

namespace qhj {

namespace {

constexpr double kNodalThreshold = 1e-12;
constexpr double kMomentumThreshold = 1e-12;

std::string point_string(const Vec3& r) {
  return "(" + std::to_string(r[0]) + ", " + std::to_string(r[1]) + ", " +
         std::to_string(r[2]) + ")";
}

struct Primed {
  double theta = 0.0;  // theta' = a theta + b phi
  double phi = 0.0;
  Vec3 grad_theta{};
  Vec3 grad_phi{};
  Vec3 second_theta{};
  Vec3 second_phi{};
};

Primed prime(const ReducedActionField& action, const FieldSample& s) {
  const double a = action.a();
  const double b = action.b();
  Primed p;
  p.theta = a * s.theta + b * s.phi;
  p.phi = s.phi;
  for (std::size_t m = 0; m < 3; ++m) {
    p.grad_theta[m] = a * s.grad_theta[m] + b * s.grad_phi[m];
    p.second_theta[m] = a * s.second_theta[m] + b * s.second_phi[m];
  }
  p.grad_phi = s.grad_phi;
  p.second_phi = s.second_phi;
  return p;
}

void require_non_nodal(double R, double theta, double phi, const Vec3& r) {
  const double scale = std::max({std::fabs(theta), std::fabs(phi), 1.0});
  if (!(R >= kNodalThreshold * scale)) {
    throw Error(ErrorKind::NodalPoint, "theta' and phi vanish together at " + point_string(r));
  }
}

}  // namespace

ReducedActionField::ReducedActionField(SolutionField3D field, double a, double b)
    : field_(std::move(field)), a_(a), b_(b) {
  if (!std::isfinite(a) || a == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "action parameter a must be finite and nonzero");
  }
  if (!std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "action parameter b must be finite");
}

ActionSample sample(const ReducedActionField& action, const Vec3& r) {
  const FieldSample fs = action.field().evaluate(r);
  const Primed p = prime(action, fs);
  const double hbar = action.hbar();
  const double R2 = p.theta * p.theta + p.phi * p.phi;
  const double R = std::sqrt(R2);
  require_non_nodal(R, p.theta, p.phi, r);

  ActionSample out;
  out.S0_principal = p.phi != 0.0 ? hbar * std::atan(p.theta / p.phi)
                                  : hbar * std::numbers::pi / 2.0;
  out.R = R;
  for (std::size_t m = 0; m < 3; ++m) {
    out.grad_S0[m] = hbar * (p.phi * p.grad_theta[m] - p.theta * p.grad_phi[m]) / R2;
    // Chain rule gives
    //   R'' = [θ'_m^2 + φ_m^2 + θ' θ'_mm + φ φ_mm] / R - (θ' θ'_m + φ φ_m)^2 / R^3,
    // and (θ'_m^2 + φ_m^2) R^2 - (θ' θ'_m + φ φ_m)^2 = (φ θ'_m - θ' φ_m)^2 removes
    // the 1/R^2 cancellation near nodes.
    const double w = p.phi * p.grad_theta[m] - p.theta * p.grad_phi[m];
    const double wave = p.theta * p.second_theta[m] + p.phi * p.second_phi[m];
    out.hessian_R_diag[m] = (w * w / R2 + wave) / R;
    out.wave_curvature[m] = wave / R2;
  }
  out.V = action.field().potential(r);
  return out;
}

double qshje_residual(const ReducedActionField& action, const Vec3& r) {
  const ActionSample s = sample(action, r);
  const double m = action.mass();
  const double hbar = action.hbar();
  const double laplacian_R = s.hessian_R_diag[0] + s.hessian_R_diag[1] + s.hessian_R_diag[2];
  return dot(s.grad_S0, s.grad_S0) / (2.0 * m) - hbar * hbar / (2.0 * m) * laplacian_R / s.R +
         s.V - action.energy();
}

double continuity_identity_residual(const ReducedActionField& action, const Vec3& r) {
  const ActionSample s = sample(action, r);
  const FieldSample fs = action.field().evaluate(r);
  const double ha = action.hbar() * action.a();
  const double R2 = s.R * s.R;
  double worst = 0.0;
  for (std::size_t m = 0; m < 3; ++m) {
    const double lhs = R2 * s.grad_S0[m];
    const double rhs = ha * (fs.phi * fs.grad_theta[m] - fs.theta * fs.grad_phi[m]);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

double continuity_divergence_residual(const ReducedActionField& action, const Vec3& r,
                                      double step) {
  auto flux = [&](const Vec3& p, std::size_t m) {
    const ActionSample s = sample(action, p);
    return s.R * s.R * s.grad_S0[m];
  };
  double divergence = 0.0;
  for (Axis a : kAxes) {
    const std::size_t m = index(a);
    const Vec3 e = step * unit(a);
    divergence += (flux(r + e, m) - flux(r - e, m)) / (2.0 * step);
  }
  return std::fabs(divergence);
}

ActionDerivatives1D action_derivatives_1d(const ReducedActionField& action, double x) {
  if (!action.field().varies_only_along(Axis::X)) {
    throw Error(ErrorKind::InvalidArgument, "one-dimensional analysis needs a field along x only");
  }
  const AxisJets jets = action.field().jets_along(Axis::X, {x, 0.0, 0.0});
  const double a = action.a();
  const double b = action.b();
  const Jet& t = jets.theta;
  const Jet& f = jets.phi;
  // P = theta', Q = phi
  const double P0 = a * t.value + b * f.value, P1 = a * t.d1 + b * f.d1;
  const double P2 = a * t.d2 + b * f.d2, P3 = a * t.d3 + b * f.d3;
  const double Q0 = f.value, Q1 = f.d1, Q2 = f.d2, Q3 = f.d3;

  const double D = P0 * P0 + Q0 * Q0;
  const double R = std::sqrt(D);
  require_non_nodal(R, P0, Q0, {x, 0.0, 0.0});
  const double D1 = 2.0 * (P0 * P1 + Q0 * Q1);
  const double D2 = 2.0 * (P1 * P1 + P0 * P2 + Q1 * Q1 + Q0 * Q2);
  // W = Q P' - P Q' and its derivatives; W' vanishes for exact solutions.
  const double W0 = Q0 * P1 - P0 * Q1;
  const double W1 = Q0 * P2 - P0 * Q2;
  const double W2 = Q1 * P2 + Q0 * P3 - P1 * Q2 - P0 * Q3;

  const double hbar = action.hbar();
  const double N = W1 * D - W0 * D1;
  ActionDerivatives1D out;
  out.d1 = hbar * W0 / D;
  out.d2 = hbar * N / (D * D);
  out.d3 = hbar * ((W2 * D - W0 * D2) / (D * D) - 2.0 * D1 * N / (D * D * D));
  return out;
}

double floyd_residual_1d(const ReducedActionField& action, double x) {
  const ActionDerivatives1D s = action_derivatives_1d(action, x);
  if (!(std::fabs(s.d1) >= kMomentumThreshold)) {
    throw Error(ErrorKind::ZeroConjugateMomentum, "S0' vanishes at x = " + std::to_string(x));
  }
  const double m = action.mass();
  const double hbar = action.hbar();
  const double ratio2 = s.d2 / s.d1;
  const double ratio3 = s.d3 / s.d1;
  const double V = action.field().potential({x, 0.0, 0.0});
  return s.d1 * s.d1 / (2.0 * m) -
         hbar * hbar / (4.0 * m) * (1.5 * ratio2 * ratio2 - ratio3) + V - action.energy();
}

}  // namespace qhj

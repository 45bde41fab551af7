#include "qhj/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qhj/errors.hpp"

namespace qhj {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

TabulatedPotential::TabulatedPotential(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  const std::size_t n = grid_.size();
  if (n < 4) {
    throw Error(ErrorKind::InvalidArgument, "tabulated potential needs at least 4 points");
  }
  if (values_.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "tabulated grid and values differ in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i])) {
      throw Error(ErrorKind::InvalidArgument, "tabulated potential has non-finite entries");
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "tabulated grid must be strictly ascending");
    }
  }

  // Natural spline: M_0 = M_{n-1} = 0, tridiagonal solve for the interior.
  curvature_.assign(n, 0.0);
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = grid_[i] - grid_[i - 1];
    const double h1 = grid_[i + 1] - grid_[i];
    const double lower = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    upper[i] = h1 / 6.0;
    rhs[i] = (values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0;
    if (i > 1) {
      const double w = lower / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    curvature_[i] = (rhs[i] - upper[i] * curvature_[i + 1]) / diag[i];
  }
}

std::size_t TabulatedPotential::interval(double x) const {
  if (!(x >= grid_.front() && x <= grid_.back())) {
    throw Error(ErrorKind::OutOfDomain,
                "x = " + std::to_string(x) + " outside tabulated grid [" +
                    std::to_string(grid_.front()) + ", " + std::to_string(grid_.back()) + "]");
  }
  auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(grid_.begin(), it));
  if (i == 0) return 0;
  return std::min(i - 1, grid_.size() - 2);
}

double TabulatedPotential::value(double x) const {
  const std::size_t i = interval(x);
  const double h = grid_[i + 1] - grid_[i];
  const double b = (x - grid_[i]) / h;
  const double a = 1.0 - b;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * curvature_[i] + (b * b * b - b) * curvature_[i + 1]) * h * h / 6.0;
}

double TabulatedPotential::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = grid_[i + 1] - grid_[i];
  const double b = (x - grid_[i]) / h;
  const double a = 1.0 - b;
  return (values_[i + 1] - values_[i]) / h -
         (3.0 * a * a - 1.0) / 6.0 * h * curvature_[i] +
         (3.0 * b * b - 1.0) / 6.0 * h * curvature_[i + 1];
}

AxisPotential::AxisPotential(Axis axis, AxisPotentialKind kind)
    : axis_(axis), kind_(std::move(kind)) {
  if (const auto* ho = std::get_if<HarmonicOscillator>(&kind_)) {
    if (!(ho->omega > 0.0) || !std::isfinite(ho->omega)) {
      throw Error(ErrorKind::InvalidArgument, "harmonic oscillator needs omega > 0");
    }
  }
  if (const auto* ramp = std::get_if<LinearRamp>(&kind_)) {
    if (!std::isfinite(ramp->slope)) {
      throw Error(ErrorKind::InvalidArgument, "linear ramp slope must be finite");
    }
  }
}

double AxisPotential::value(double x, double mass) const {
  return std::visit(
      Overloaded{
          [](const FreePotential&) { return 0.0; },
          [&](const HarmonicOscillator& ho) { return 0.5 * mass * ho.omega * ho.omega * x * x; },
          [&](const LinearRamp& ramp) { return ramp.slope * x; },
          [&](const TabulatedPotential& tab) { return tab.value(x); },
      },
      kind_);
}

double AxisPotential::derivative(double x, double mass) const {
  return std::visit(
      Overloaded{
          [](const FreePotential&) { return 0.0; },
          [&](const HarmonicOscillator& ho) { return mass * ho.omega * ho.omega * x; },
          [&](const LinearRamp& ramp) { return ramp.slope; },
          [&](const TabulatedPotential& tab) { return tab.derivative(x); },
      },
      kind_);
}

SeparablePotential::SeparablePotential(std::array<AxisPotential, 3> axes, double mass)
    : axes_(std::move(axes)), mass_(mass) {
  if (!(mass > 0.0)) throw Error(ErrorKind::InvalidArgument, "mass must be positive");
  for (Axis a : kAxes) {
    if (axes_[index(a)].axis() != a) {
      throw Error(ErrorKind::InvalidArgument, "axis potentials must be ordered x, y, z");
    }
  }
}

PotentialValue SeparablePotential::evaluate(const Vec3& r) const {
  PotentialValue out;
  for (Axis a : kAxes) {
    out.per_axis[index(a)] = axes_[index(a)].value(r[index(a)], mass_);
  }
  out.total = out.per_axis[0] + out.per_axis[1] + out.per_axis[2];
  return out;
}

Vec3 SeparablePotential::gradient(const Vec3& r) const {
  Vec3 g{};
  for (Axis a : kAxes) g[index(a)] = axes_[index(a)].derivative(r[index(a)], mass_);
  return g;
}

}  // namespace qhj

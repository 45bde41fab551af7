#pragma once

#include <array>
#include <variant>
#include <vector>

#include "qhj/vec3.hpp"

namespace qhj {

struct FreePotential {
  bool operator==(const FreePotential&) const = default;
};

/// V(x) = m0 * omega^2 * x^2 / 2
struct HarmonicOscillator {
  double omega = 1.0;
  bool operator==(const HarmonicOscillator&) const = default;
};

/// V(x) = slope * x
struct LinearRamp {
  double slope = 0.0;
  bool operator==(const LinearRamp&) const = default;
};

/// Natural cubic spline through (grid, values). The spline is C2, which the
/// Numerov tables and the curvature of R rely on.
class TabulatedPotential {
 public:
  TabulatedPotential(std::vector<double> grid, std::vector<double> values);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double value(double x) const;
  double derivative(double x) const;

  bool operator==(const TabulatedPotential& other) const {
    return grid_ == other.grid_ && values_ == other.values_;
  }

 private:
  std::size_t interval(double x) const;

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> curvature_;  // spline second derivatives at the nodes
};

using AxisPotentialKind =
    std::variant<FreePotential, HarmonicOscillator, LinearRamp, TabulatedPotential>;

class AxisPotential {
 public:
  AxisPotential() = default;
  AxisPotential(Axis axis, AxisPotentialKind kind);

  Axis axis() const noexcept { return axis_; }
  const AxisPotentialKind& kind() const noexcept { return kind_; }

  /// Throws OutOfDomain for tabulated kinds queried outside their grid.
  double value(double x, double mass) const;
  double derivative(double x, double mass) const;

  bool operator==(const AxisPotential&) const = default;

 private:
  Axis axis_ = Axis::X;
  AxisPotentialKind kind_ = FreePotential{};
};

struct PotentialValue {
  double total = 0.0;
  Vec3 per_axis{0.0, 0.0, 0.0};
};

/// V(r) = Vx(x) + Vy(y) + Vz(z). Immutable after construction.
class SeparablePotential {
 public:
  SeparablePotential(std::array<AxisPotential, 3> axes, double mass);

  const AxisPotential& axis(Axis a) const { return axes_[index(a)]; }
  double mass() const noexcept { return mass_; }

  PotentialValue evaluate(const Vec3& r) const;
  Vec3 gradient(const Vec3& r) const;

 private:
  std::array<AxisPotential, 3> axes_;
  double mass_;
};

inline PotentialValue evaluate(const SeparablePotential& potential, const Vec3& r) {
  return potential.evaluate(r);
}

}  // namespace qhj

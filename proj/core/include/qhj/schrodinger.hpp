#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qhj/potentials.hpp"
#include "qhj/vec3.hpp"

namespace qhj {

/// Natural-unit constants carried by every solution and field.
struct Physics {
  double hbar = 1.0;
  double mass = 1.0;
  bool operator==(const Physics&) const = default;
};

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double x) const;
  bool operator==(const Interval&) const = default;
};

/// Value and the first three derivatives of a 1D function at a point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

enum class Selector { U1 = 0, U2 = 1 };

enum class CatalogId { Free, ZeroEnergyFree, Box };

struct CatalogEntry {
  CatalogId id = CatalogId::Free;
  double k = 1.0;       // wave number for Free
  double length = 1.0;  // box width L for Box
  int level = 1;        // box quantum number n
  bool operator==(const CatalogEntry&) const = default;
};

struct InitialCondition {
  double value = 0.0;
  double slope = 0.0;
  bool operator==(const InitialCondition&) const = default;
};

struct NumerovSetup {
  Interval domain;
  double step = 1e-3;
  InitialCondition ic1{1.0, 0.0};
  InitialCondition ic2{0.0, 1.0};
  /// Where the initial conditions are imposed; defaults to the left edge.
  /// Must fall on a grid node.
  std::optional<double> anchor;
  bool operator==(const NumerovSetup&) const = default;
};

enum class SolutionSource { Catalog, Numerov };

struct NumerovTable;

/// Two independent real solutions u1, u2 of
///   u'' = (2 m0 / hbar^2) (V_axis - E_axis) u
/// along one axis. Second and third derivatives always come from the ODE
/// identity, never from differencing.
class AxisSolutionPair {
 public:
  Axis axis() const noexcept { return axis_; }
  double energy() const noexcept { return energy_; }
  const Physics& physics() const noexcept { return physics_; }
  const AxisPotential& potential() const noexcept { return potential_; }
  SolutionSource source() const noexcept { return source_; }
  const std::optional<CatalogEntry>& catalog() const noexcept { return catalog_; }
  const Interval& domain() const noexcept { return domain_; }

  /// Interval used for independence probes and drift scans: the domain
  /// when bounded, [-1, 1] otherwise.
  Interval probe_interval() const;

  /// u1 u2' - u2 u1' at the left edge of the domain (or of the probe
  /// interval for unbounded domains).
  double wronskian_ref() const noexcept { return wronskian_ref_; }

  Jet evaluate(Selector which, double x) const;

  /// Numerov grid nodes and stored values; empty for catalog sources.
  std::span<const double> nodes() const;
  std::span<const double> node_values(Selector which) const;

 private:
  friend AxisSolutionPair solve_axis_analytic(Axis, const CatalogEntry&, const Physics&,
                                              std::optional<double>);
  friend AxisSolutionPair solve_axis_numerov(Axis, const AxisPotential&, double,
                                             const NumerovSetup&, const Physics&);

  AxisSolutionPair() = default;
  double ode_factor(double x) const;
  double ode_factor_slope(double x) const;

  Axis axis_ = Axis::X;
  double energy_ = 0.0;
  Physics physics_;
  AxisPotential potential_;
  SolutionSource source_ = SolutionSource::Catalog;
  std::optional<CatalogEntry> catalog_;
  std::shared_ptr<const NumerovTable> table_;
  Interval domain_;
  double wronskian_ref_ = 0.0;
};

/// Catalog solutions: free(k) -> (sin kx, cos kx); zero-energy free -> (1, x);
/// box(L, n) -> (sin(n pi x / L), cos(n pi x / L)) on [0, L]. When `energy`
/// is given it must agree with the catalog value.
AxisSolutionPair solve_axis_analytic(Axis axis, const CatalogEntry& entry, const Physics& physics,
                                     std::optional<double> energy = std::nullopt);

/// Numerov tables for two solutions from independent initial conditions.
AxisSolutionPair solve_axis_numerov(Axis axis, const AxisPotential& potential, double energy,
                                    const NumerovSetup& setup, const Physics& physics);

double wronskian(const AxisSolutionPair& pair, double x);

/// coefficient * u_{sel_x}(x) * u_{sel_y}(y) * u_{sel_z}(z)
struct ProductTerm {
  double coefficient = 1.0;
  std::array<Selector, 3> selectors{Selector::U1, Selector::U1, Selector::U1};
  bool operator==(const ProductTerm&) const = default;
};

struct FieldSample {
  double theta = 0.0;
  double phi = 0.0;
  Vec3 grad_theta{};
  Vec3 grad_phi{};
  Vec3 second_theta{};  // diagonal second partials
  Vec3 second_phi{};
};

/// Derivatives of theta and phi along one axis, the other coordinates fixed.
struct AxisJets {
  Jet theta;
  Jet phi;
};

/// theta and phi as sums of separable product solutions at a common energy.
class SolutionField3D {
 public:
  double energy() const noexcept { return energy_; }
  const Physics& physics() const noexcept { return physics_; }
  const AxisSolutionPair& pair(Axis a) const { return pairs_[index(a)]; }
  const std::vector<ProductTerm>& theta_terms() const noexcept { return theta_terms_; }
  const std::vector<ProductTerm>& phi_terms() const noexcept { return phi_terms_; }

  bool contains(const Vec3& r) const;
  FieldSample evaluate(const Vec3& r) const;
  AxisJets jets_along(Axis axis, const Vec3& r) const;

  double potential(const Vec3& r) const;
  Vec3 potential_gradient(const Vec3& r) const;

  /// True when every term is constant along the two other axes
  /// (zero-energy free u1 factors).
  bool varies_only_along(Axis axis) const;

 private:
  friend SolutionField3D assemble_field(std::array<AxisSolutionPair, 3>,
                                        std::vector<ProductTerm>, std::vector<ProductTerm>);
  SolutionField3D(std::array<AxisSolutionPair, 3> pairs, std::vector<ProductTerm> theta_terms,
                  std::vector<ProductTerm> phi_terms);

  std::array<AxisSolutionPair, 3> pairs_;
  std::vector<ProductTerm> theta_terms_;
  std::vector<ProductTerm> phi_terms_;
  double energy_ = 0.0;
  Physics physics_;
};

/// Throws ProportionalSolutions when max |phi grad theta - theta grad phi|
/// over a 5x5x5 probe grid does not exceed 1e-12.
SolutionField3D assemble_field(std::array<AxisSolutionPair, 3> pairs,
                               std::vector<ProductTerm> theta_terms,
                               std::vector<ProductTerm> phi_terms);

inline FieldSample evaluate_field(const SolutionField3D& field, const Vec3& r) {
  return field.evaluate(r);
}

}  // namespace qhj

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qhj/action.hpp"
#include "qhj/dynamics.hpp"
#include "qhj/potentials.hpp"
#include "qhj/schrodinger.hpp"

namespace qhj {

struct SolutionSpec {
  SolutionSource source = SolutionSource::Catalog;
  CatalogEntry catalog;
  std::optional<double> energy;  // required for numerov, a consistency check for catalog
  NumerovSetup numerov;
  bool operator==(const SolutionSpec&) const = default;
};

struct TrajectorySpec {
  std::optional<Vec3> r0;
  IntegratorConfig config;
  bool operator==(const TrajectorySpec&) const = default;
};

struct VerifySpec {
  std::array<int, 3> grid{21, 21, 21};
  std::optional<Vec3> lo;
  std::optional<Vec3> hi;
  std::optional<double> qshje_tol;  // default 1e-9, or 1e-5 with any Numerov axis
  double continuity_tol = 1e-13;
  double wronskian_tol = 1e-9;
  bool operator==(const VerifySpec&) const = default;
};

/// Everything a run needs, as written in a scenario file.
struct Scenario {
  Physics physics;
  std::array<AxisPotential, 3> potential{AxisPotential(Axis::X, FreePotential{}),
                                         AxisPotential(Axis::Y, FreePotential{}),
                                         AxisPotential(Axis::Z, FreePotential{})};
  std::array<SolutionSpec, 3> solutions;
  std::vector<ProductTerm> theta_terms;
  std::vector<ProductTerm> phi_terms;
  double a = 1.0;
  double b = 0.0;
  TrajectorySpec trajectory;
  VerifySpec verify;
  std::vector<Vec3> metric_points;

  bool operator==(const Scenario&) const = default;
};

/// Parses and validates a scenario. Throws ParseError for malformed lines,
/// ValidationError for inconsistent values, and lets construction errors of
/// the solution field (e.g. ProportionalSolutions) propagate.
Scenario parse_scenario(std::string_view text);

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

SolutionField3D build_field(const Scenario& scenario);
ReducedActionField build_action(const Scenario& scenario);

/// Shortest text that round-trips a double (17 significant digits at most).
std::string format_number(double value);

}  // namespace qhj

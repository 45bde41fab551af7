#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qhj/dynamics.hpp"
#include "qhj/metric.hpp"
#include "qhj/scenario.hpp"

namespace qhj {

struct VerificationReport {
  std::array<int, 3> grid{};
  Vec3 lo{};
  Vec3 hi{};
  std::size_t points = 0;
  std::size_t evaluated = 0;      // non-nodal points
  std::size_t nodal_skipped = 0;
  double max_abs_qshje = 0.0;
  double mean_abs_qshje = 0.0;
  double max_continuity = 0.0;
  Vec3 wronskian_drift{};  // max relative drift per axis
  /// Metric signature per grid point, e.g. "+++" or "-++"; points where the
  /// metric is undefined are counted under "nodal" or "node_singular".
  std::map<std::string, std::size_t> signature_census;
  double qshje_tol = 0.0;
  double continuity_tol = 0.0;
  double wronskian_tol = 0.0;
  bool pass = false;
};

/// Sweeps the scenario's verify grid (or `grid` when given). Grid points are
/// evaluated concurrently; the reduction is sequential, so the report is
/// deterministic.
VerificationReport run_verify(const Scenario& scenario,
                              std::optional<std::array<int, 3>> grid = std::nullopt);

/// Relative drift of the Wronskian over the probe interval (1001 samples).
double wronskian_drift(const AxisSolutionPair& pair, int samples = 1001);

Trajectory run_trajectory(const Scenario& scenario, std::optional<Vec3> r0 = std::nullopt,
                          std::optional<double> t_end = std::nullopt);

struct MetricPointReport {
  Vec3 point{};
  std::optional<QuantumMetric> metric;
  std::optional<JacobianMatrix> jacobian;
  std::optional<std::array<double, 12>> residuals;
  std::string error;  // empty on success
};

std::vector<MetricPointReport> run_metric(const Scenario& scenario, const std::vector<Vec3>& points);

}  // namespace qhj

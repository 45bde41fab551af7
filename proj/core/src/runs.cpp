#include "qhj/runs.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qhj/errors.hpp"

namespace qhj {

namespace {

enum class PointStatus { Evaluated, Nodal };

struct PointResult {
  PointStatus status = PointStatus::Nodal;
  double qshje = 0.0;
  double continuity = 0.0;
  std::string signature;  // "+++", "node_singular" or "nodal"
};

std::string signature_key(const std::array<int, 3>& sig) {
  std::string key;
  for (int s : sig) key += s > 0 ? '+' : (s < 0 ? '-' : '0');
  return key;
}

PointResult evaluate_point(const ReducedActionField& action, const Vec3& r) {
  PointResult out;
  try {
    out.qshje = qshje_residual(action, r);
    out.continuity = continuity_identity_residual(action, r);
    out.status = PointStatus::Evaluated;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NodalPoint) throw;
    out.signature = "nodal";
    return out;
  }
  try {
    out.signature = signature_key(metric_at(action, r).signature);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NodeSingularity) throw;
    out.signature = "node_singular";
  }
  return out;
}

double grid_coordinate(double lo, double hi, int n, int i) {
  if (n == 1) return 0.5 * (lo + hi);
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

double wronskian_drift(const AxisSolutionPair& pair, int samples) {
  const Interval iv = pair.probe_interval();
  const double ref = pair.wronskian_ref();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = grid_coordinate(iv.lo, iv.hi, samples, i);
    worst = std::max(worst, std::fabs(wronskian(pair, x) - ref));
  }
  return worst / std::max(std::fabs(ref), 1e-300);
}

VerificationReport run_verify(const Scenario& scenario, std::optional<std::array<int, 3>> grid) {
  const ReducedActionField action = build_action(scenario);
  const SolutionField3D& field = action.field();

  VerificationReport rep;
  rep.grid = grid.value_or(scenario.verify.grid);
  for (Axis a : kAxes) {
    const Interval iv = field.pair(a).probe_interval();
    rep.lo[index(a)] = scenario.verify.lo ? (*scenario.verify.lo)[index(a)] : iv.lo;
    rep.hi[index(a)] = scenario.verify.hi ? (*scenario.verify.hi)[index(a)] : iv.hi;
    if (rep.grid[index(a)] < 1) throw ValidationError("verify.grid", "counts must be >= 1");
  }
  if (!field.contains(rep.lo) || !field.contains(rep.hi)) {
    throw ValidationError("verify", "grid bounds fall outside the solution domain");
  }

  const auto nx = static_cast<std::size_t>(rep.grid[0]);
  const auto ny = static_cast<std::size_t>(rep.grid[1]);
  const auto nz = static_cast<std::size_t>(rep.grid[2]);
  rep.points = nx * ny * nz;
  std::vector<PointResult> results(rep.points);

  auto point_at = [&](std::size_t flat) {
    const auto i = static_cast<int>(flat / (ny * nz));
    const auto j = static_cast<int>((flat / nz) % ny);
    const auto k = static_cast<int>(flat % nz);
    return Vec3{grid_coordinate(rep.lo[0], rep.hi[0], rep.grid[0], i),
                grid_coordinate(rep.lo[1], rep.hi[1], rep.grid[1], j),
                grid_coordinate(rep.lo[2], rep.hi[2], rep.grid[2], k)};
  };

  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  const std::size_t chunk = (rep.points + workers - 1) / workers;
  {
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::size_t end = std::min(rep.points, (w + 1) * chunk);
          for (std::size_t p = w * chunk; p < end; ++p) {
            results[p] = evaluate_point(action, point_at(p));
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  double sum = 0.0;
  for (const PointResult& r : results) {
    ++rep.signature_census[r.signature];
    if (r.status == PointStatus::Nodal) {
      ++rep.nodal_skipped;
      continue;
    }
    ++rep.evaluated;
    sum += std::fabs(r.qshje);
    rep.max_abs_qshje = std::max(rep.max_abs_qshje, std::fabs(r.qshje));
    rep.max_continuity = std::max(rep.max_continuity, r.continuity);
  }
  rep.mean_abs_qshje = rep.evaluated > 0 ? sum / static_cast<double>(rep.evaluated) : 0.0;

  bool any_numerov = false;
  for (Axis a : kAxes) {
    rep.wronskian_drift[index(a)] = wronskian_drift(field.pair(a));
    any_numerov = any_numerov || field.pair(a).source() == SolutionSource::Numerov;
  }
  rep.qshje_tol = scenario.verify.qshje_tol.value_or(any_numerov ? 1e-5 : 1e-9);
  rep.continuity_tol = scenario.verify.continuity_tol;
  rep.wronskian_tol = scenario.verify.wronskian_tol;
  rep.pass = rep.evaluated > 0 && rep.max_abs_qshje < rep.qshje_tol &&
             rep.max_continuity < rep.continuity_tol &&
             max_abs(rep.wronskian_drift) < rep.wronskian_tol;
  return rep;
}

Trajectory run_trajectory(const Scenario& scenario, std::optional<Vec3> r0,
                          std::optional<double> t_end) {
  const std::optional<Vec3> start = r0 ? r0 : scenario.trajectory.r0;
  if (!start) throw ValidationError("trajectory.r0", "is required");
  IntegratorConfig cfg = scenario.trajectory.config;
  if (t_end) {
    if (!(*t_end > 0.0)) throw ValidationError("trajectory.t_end", "must be positive");
    cfg.t_end = *t_end;
  }
  const ReducedActionField action = build_action(scenario);
  return integrate_first_order(action, *start, cfg);
}

std::vector<MetricPointReport> run_metric(const Scenario& scenario,
                                          const std::vector<Vec3>& points) {
  const ReducedActionField action = build_action(scenario);
  std::vector<MetricPointReport> out;
  out.reserve(points.size());
  for (const Vec3& p : points) {
    MetricPointReport rep;
    rep.point = p;
    try {
      rep.metric = metric_at(action, p);
      rep.jacobian = canonical_jacobian(*rep.metric);
      rep.residuals = verify_transformation(*rep.jacobian, *rep.metric);
    } catch (const NonRiemannianPoint& e) {
      rep.error = "NonRiemannianPoint " + signature_string(e.signature());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NodalPoint || e.kind() == ErrorKind::NodeSingularity ||
          e.kind() == ErrorKind::OutOfDomain) {
        rep.error = e.what();
      } else {
        throw;
      }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace qhj

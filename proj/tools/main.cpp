// qhj command-line front end: verify, trajectory and metric runs driven by a
// scenario file.
#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qhj/errors.hpp"
#include "qhj/report_io.hpp"
#include "qhj/runs.hpp"
#include "qhj/scenario.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3, kIo = 4 };

int exit_code_for(qhj::ErrorKind kind) {
  using K = qhj::ErrorKind;
  switch (kind) {
    case K::IoError: return kIo;
    case K::ParseError:
    case K::ValidationError:
    case K::InvalidArgument:
    case K::ProportionalSolutions:
    case K::InconsistentEnergy:
    case K::DegenerateICs:
    case K::UnknownCatalogEntry:
    case K::InconsistentInitialVelocity:
      return kValidation;
    default: return kNumerical;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qhj::Error(qhj::ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses "a,b,c" into three doubles.
std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start);
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    item = b == std::string::npos ? std::string() : item.substr(b, e - b + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw qhj::Error(qhj::ErrorKind::InvalidArgument, "bad number '" + item + "' in " + what);
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

qhj::Vec3 parse_vec3(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, what);
  if (v.size() != 3) {
    throw qhj::Error(qhj::ErrorKind::InvalidArgument, what + " needs three comma-separated values");
  }
  return {v[0], v[1], v[2]};
}

std::vector<qhj::Vec3> parse_points(const std::string& text) {
  std::vector<qhj::Vec3> points;
  std::size_t start = 0;
  while (true) {
    const std::size_t semi = text.find(';', start);
    const std::string item = text.substr(start, semi == std::string::npos ? std::string::npos
                                                                          : semi - start);
    if (item.find_first_not_of(" \t") != std::string::npos) points.push_back(parse_vec3(item, "--at"));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return points;
}

fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".termination.json");
  return p;
}

int run_verify_cmd(const std::string& file, const std::string& grid_text, const std::string& out) {
  const qhj::Scenario scenario = qhj::parse_scenario(read_file(file));
  std::optional<std::array<int, 3>> grid;
  if (!grid_text.empty()) {
    const auto g = parse_list(grid_text, "--grid");
    if (g.size() != 3) {
      throw qhj::Error(qhj::ErrorKind::InvalidArgument, "--grid needs NX,NY,NZ");
    }
    std::array<int, 3> counts{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(g[i] >= 1.0) || g[i] != static_cast<double>(static_cast<int>(g[i]))) {
        throw qhj::Error(qhj::ErrorKind::InvalidArgument, "--grid entries must be positive integers");
      }
      counts[i] = static_cast<int>(g[i]);
    }
    grid = counts;
  }
  const qhj::VerificationReport report = qhj::run_verify(scenario, grid);
  const std::string json = qhj::verification_json(report);
  if (out.empty()) {
    std::cout << json << '\n';
  } else {
    qhj::write_file_atomic(out, json + "\n");
    std::cout << "points " << report.points << ", evaluated " << report.evaluated
              << ", nodal skipped " << report.nodal_skipped << '\n'
              << "max |qshje| " << qhj::format_number(report.max_abs_qshje) << " (tol "
              << qhj::format_number(report.qshje_tol) << ")\n"
              << "max continuity " << qhj::format_number(report.max_continuity) << '\n'
              << (report.pass ? "PASS" : "FAIL") << '\n';
  }
  return report.pass ? kOk : kNumerical;
}

int run_trajectory_cmd(const std::string& file, const std::string& r0_text, std::optional<double> t_end,
                       const std::string& out, const std::string& plot) {
  const qhj::Scenario scenario = qhj::parse_scenario(read_file(file));
  std::optional<qhj::Vec3> r0;
  if (!r0_text.empty()) r0 = parse_vec3(r0_text, "--r0");
  if (!r0 && !scenario.trajectory.r0) {
    throw qhj::Error(qhj::ErrorKind::ValidationError, "trajectory.r0: missing (set it or pass --r0)");
  }
  const qhj::Trajectory traj = qhj::run_trajectory(scenario, r0, t_end);
  const std::string csv = qhj::trajectory_csv(traj);
  const std::string term = qhj::termination_json(traj);
  if (out.empty()) {
    std::cout << csv;
    std::cerr << term << '\n';
  } else {
    qhj::write_file_atomic(out, csv);
    qhj::write_file_atomic(sidecar_path(out), term + "\n");
  }
  if (!plot.empty()) {
    const fs::path csv_ref = out.empty() ? fs::path("trajectory.csv") : fs::path(out);
    qhj::write_file_atomic(plot, qhj::gnuplot_script(csv_ref));
  }
  if (traj.termination.kind == qhj::Termination::SingularityEvent) {
    std::cerr << "singularity event (" << qhj::to_string(traj.termination.singularity)
              << ") at t = " << qhj::format_number(traj.termination.t) << ": "
              << traj.termination.detail << '\n';
    return kNumerical;
  }
  return kOk;
}

int run_metric_cmd(const std::string& file, const std::string& at, const std::string& out) {
  const qhj::Scenario scenario = qhj::parse_scenario(read_file(file));
  const std::vector<qhj::Vec3> points = at.empty() ? scenario.metric_points : parse_points(at);
  if (points.empty()) {
    throw qhj::Error(qhj::ErrorKind::ValidationError, "metric.points: no probe points (pass --at)");
  }
  const auto reports = qhj::run_metric(scenario, points);
  std::cout << qhj::metric_text(reports);
  if (!out.empty()) qhj::write_file_atomic(out, qhj::metric_json(reports) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum stationary Hamilton-Jacobi scenario runner"};
  app.require_subcommand(1);

  std::string file;
  std::string grid;
  std::string out;
  std::string r0;
  std::optional<double> t_end;
  std::string plot;
  std::string at;

  CLI::App* verify = app.add_subcommand("verify", "sweep the verify grid and check residuals");
  verify->add_option("scenario", file, "scenario file")->required();
  verify->add_option("--grid", grid, "grid point counts NX,NY,NZ");
  verify->add_option("--out", out, "write the JSON report here");

  CLI::App* trajectory = app.add_subcommand("trajectory", "integrate a trajectory");
  trajectory->add_option("scenario", file, "scenario file")->required();
  trajectory->add_option("--r0", r0, "start point x,y,z");
  trajectory->add_option("--t-end", t_end, "final time");
  trajectory->add_option("--out", out, "write the CSV here (termination JSON goes next to it)");
  trajectory->add_option("--plot", plot, "write a gnuplot script here");

  CLI::App* metric = app.add_subcommand("metric", "metric, Jacobian and residuals at points");
  metric->add_option("scenario", file, "scenario file")->required();
  metric->add_option("--at", at, "points x,y,z[;x,y,z...]");
  metric->add_option("--out", out, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*verify) return run_verify_cmd(file, grid, out);
    if (*trajectory) return run_trajectory_cmd(file, r0, t_end, out, plot);
    if (*metric) return run_metric_cmd(file, at, out);
  } catch (const qhj::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

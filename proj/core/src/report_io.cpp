#include "qhj/report_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qhj/errors.hpp"
#include "qhj/scenario.hpp"

namespace qhj {

namespace {

using nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = kTrajectoryCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const TrajectoryState& s = traj.states[i];
    const StateDiagnostics& d = traj.diagnostics[i];
    const double cols[] = {s.t,           s.position[0], s.position[1],    s.position[2],
                           s.velocity[0], s.velocity[1], s.velocity[2],    d.grad_S0[0],
                           d.grad_S0[1],  d.grad_S0[2],  d.law_residual,   d.energy_residual};
    for (std::size_t c = 0; c < std::size(cols); ++c) {
      if (c > 0) out += ',';
      out += format_number(cols[c]);
    }
    out += '\n';
  }
  return out;
}

std::string termination_json(const Trajectory& traj) {
  const TerminationRecord& t = traj.termination;
  json j;
  j["termination"] = {
      {"kind", std::string(to_string(t.kind))},
      {"singularity", std::string(to_string(t.singularity))},
      {"t", t.t},
      {"position", vec_json(t.position)},
      {"detail", t.detail},
  };
  j["states"] = traj.states.size();
  j["max_abs_law_residual"] = traj.max_abs_law_residual;
  j["max_abs_energy_residual"] = traj.max_abs_energy_residual;
  return j.dump(2) + "\n";
}

std::string verification_json(const VerificationReport& r) {
  json census = json::object();
  for (const auto& [sig, count] : r.signature_census) census[sig] = count;
  json j;
  j["grid"] = {{"counts", r.grid}, {"lo", vec_json(r.lo)}, {"hi", vec_json(r.hi)}};
  j["points"] = r.points;
  j["evaluated"] = r.evaluated;
  j["nodal_skipped"] = r.nodal_skipped;
  j["qshje_residual"] = {{"max_abs", r.max_abs_qshje}, {"mean_abs", r.mean_abs_qshje}};
  j["continuity_residual_max"] = r.max_continuity;
  j["wronskian_drift"] = {{"x", r.wronskian_drift[0]},
                          {"y", r.wronskian_drift[1]},
                          {"z", r.wronskian_drift[2]}};
  j["signature_census"] = census;
  j["thresholds"] = {{"qshje", r.qshje_tol},
                     {"continuity", r.continuity_tol},
                     {"wronskian", r.wronskian_tol}};
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

std::string metric_json(const std::vector<MetricPointReport>& reports) {
  json arr = json::array();
  for (const MetricPointReport& r : reports) {
    json p;
    p["point"] = vec_json(r.point);
    if (r.metric) {
      p["a_upper"] = vec_json(r.metric->a_upper);
      p["a_lower"] = vec_json(r.metric->a_lower);
      p["signature"] = signature_string(r.metric->signature);
    }
    if (r.jacobian) {
      json rows = json::array();
      for (const Vec3& row : r.jacobian->entries) rows.push_back(vec_json(row));
      p["jacobian"] = rows;
    }
    if (r.residuals) p["residuals"] = *r.residuals;
    if (!r.error.empty()) p["error"] = r.error;
    arr.push_back(p);
  }
  json j;
  j["points"] = arr;
  return j.dump(2) + "\n";
}

std::string metric_text(const std::vector<MetricPointReport>& reports) {
  std::ostringstream out;
  auto vec = [](const Vec3& v) {
    return "(" + format_number(v[0]) + ", " + format_number(v[1]) + ", " + format_number(v[2]) + ")";
  };
  for (const MetricPointReport& r : reports) {
    out << "point " << vec(r.point) << "\n";
    if (r.metric) {
      out << "  a_upper   " << vec(r.metric->a_upper) << "\n"
          << "  a_lower   " << vec(r.metric->a_lower) << "\n"
          << "  signature " << signature_string(r.metric->signature) << "\n";
    }
    if (r.jacobian) {
      out << "  jacobian\n";
      for (const Vec3& row : r.jacobian->entries) out << "    " << vec(row) << "\n";
    }
    if (r.residuals) {
      double worst = 0.0;
      for (double v : *r.residuals) worst = std::max(worst, v);
      out << "  residuals max " << format_number(worst) << "\n";
    }
    if (!r.error.empty()) out << "  error " << r.error << "\n";
  }
  return out.str();
}

std::string gnuplot_script(const std::filesystem::path& csv) {
  const std::string file = csv.generic_string();
  std::ostringstream out;
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set multiplot layout 2,1\n"
      << "set xlabel 't'\n"
      << "plot '" << file << "' using 1:2 with lines, '' using 1:3 with lines, '' using 1:4 with lines\n"
      << "set logscale y\n"
      << "plot '" << file << "' using 1:(abs($11)+1e-300) with lines title 'law residual', "
      << "'' using 1:(abs($12)+1e-300) with lines title 'energy residual'\n"
      << "unset multiplot\n";
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::IoError, "cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw Error(ErrorKind::IoError, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::IoError, "cannot move output into " + path.string());
  }
}

}  // namespace qhj

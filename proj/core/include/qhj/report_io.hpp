#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qhj/dynamics.hpp"
#include "qhj/runs.hpp"

namespace qhj {

inline constexpr const char* kTrajectoryCsvHeader =
    "t,x,y,z,vx,vy,vz,dS0dx,dS0dy,dS0dz,law_residual,energy_residual";

std::string trajectory_csv(const Trajectory& trajectory);
std::string termination_json(const Trajectory& trajectory);
std::string verification_json(const VerificationReport& report);
std::string metric_json(const std::vector<MetricPointReport>& reports);
std::string metric_text(const std::vector<MetricPointReport>& reports);

/// gnuplot script plotting x(t), y(t), z(t) and the residual columns.
std::string gnuplot_script(const std::filesystem::path& csv);

/// Writes through a temporary sibling and renames it into place. Throws
/// Error(IoError) on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qhj

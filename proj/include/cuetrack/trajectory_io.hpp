#pragma once

#include <string>
#include <vector>

#include "cuetrack/trajectory.hpp"

namespace cuetrack {

// Trajectory CSV: `# schema_version: 1`, optional further `# key: value`
// comment lines, a fixed header row, then one row per frame with the flags as
// a comma-free hex bitmask. Floats are written with %.17g so identical
// trajectories produce identical bytes.
void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const std::vector<std::string>& header_comments = {});
Trajectory read_trajectory_csv(const std::string& path);

// JSONL variant mirroring the CSV fields, one record per frame, preceded by a
// schema header line.
void write_trajectory_jsonl(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_jsonl(const std::string& path);

// %.17g formatting used across all writers.
std::string format_double(double v);

}  // namespace cuetrack

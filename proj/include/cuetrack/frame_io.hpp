#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuetrack/objective.hpp"
#include "cuetrack/observation.hpp"

namespace cuetrack {

/// One line of the frames JSONL file. hand_joints_2d and intrinsics are
/// pass-through metadata for downstream scoring; the tracker itself only
/// consumes object_points and hand_joints_3d.
struct FrameRecord {
  int frame = 0;
  PointMatrix object_points{0, 3};
  std::optional<Eigen::Matrix<double, HandJoints::kNumJoints, 3>> hand_joints_3d;
  std::optional<Eigen::Matrix<double, HandJoints::kNumJoints, 2>> hand_joints_2d;
  std::optional<Intrinsics> intrinsics;
};

/// Read frame records. Unknown fields are ignored; duplicate frame indices,
/// malformed joint arrays, and non-JSON lines raise SchemaError with
/// file:line diagnostics. Records come back sorted by frame index.
std::vector<FrameRecord> read_frames_jsonl(const std::string& path);

void write_frames_jsonl(const std::vector<FrameRecord>& records, const std::string& path);

std::vector<FrameObservation> to_observations(const std::vector<FrameRecord>& records);

}  // namespace cuetrack

#pragma once

#include <string>

#include "cuetrack/geometry.hpp"
#include "cuetrack/trajectory.hpp"

namespace cuetrack {

/// Fixed transforms for demonstration-to-robot retargeting: the camera pose
/// in the robot base frame and the grasp offset between the end effector and
/// the object.
struct RetargetConfig {
  Pose t_base_cam;
  Pose t_eef_obj;
  double rate_hz = 30.0;  // stream pacing metadata only
};

/// Per-frame end-effector targets:
/// T_base_eef(t) = T_base_cam * T_cam_obj(t) * T_eef_obj^-1.
/// Frame indices and flags pass through unchanged.
Trajectory retarget(const Trajectory& traj, const RetargetConfig& cfg);

// JSON config: {"t_base_cam": {"q":[w,x,y,z], "t":[x,y,z]}, "t_eef_obj": ...,
// "rate_hz": 30}. Throws ConfigError / SchemaError.
RetargetConfig load_retarget_config(const std::string& path);

}  // namespace cuetrack

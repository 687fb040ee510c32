#include "cuetrack/retarget.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "cuetrack/errors.hpp"

namespace cuetrack {

namespace {

using nlohmann::json;

Pose parse_pose(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("q") || !j.contains("t") || !j["q"].is_array() ||
      j["q"].size() != 4 || !j["t"].is_array() || j["t"].size() != 3) {
    throw ConfigError("retarget config: field '" + field +
                      "' must be {\"q\":[w,x,y,z],\"t\":[x,y,z]}");
  }
  for (const auto& v : j["q"]) {
    if (!v.is_number()) throw ConfigError("retarget config: '" + field + "'.q must be numeric");
  }
  for (const auto& v : j["t"]) {
    if (!v.is_number()) throw ConfigError("retarget config: '" + field + "'.t must be numeric");
  }
  Pose p;
  try {
    p.rotation = UnitQuaternion(j["q"][0].get<double>(), j["q"][1].get<double>(),
                                j["q"][2].get<double>(), j["q"][3].get<double>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("retarget config: '" + field + "': " + e.what());
  }
  p.translation = {j["t"][0].get<double>(), j["t"][1].get<double>(), j["t"][2].get<double>()};
  return p;
}

}  // namespace

Trajectory retarget(const Trajectory& traj, const RetargetConfig& cfg) {
  if (traj.empty()) {
    throw EmptyTrajectory("retarget: empty trajectory");
  }
  const Pose grasp_inv = cfg.t_eef_obj.inverse();
  Trajectory out = traj;
  for (auto& e : out.entries()) {
    e.pose = cfg.t_base_cam * e.pose * grasp_inv;
  }
  return out;
}

RetargetConfig load_retarget_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path + ": cannot open retarget config");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path + ": invalid JSON: " + e.what());
  }
  RetargetConfig cfg;
  if (!j.contains("t_base_cam") || !j.contains("t_eef_obj")) {
    throw ConfigError(path + ": retarget config needs 't_base_cam' and 't_eef_obj'");
  }
  cfg.t_base_cam = parse_pose(j["t_base_cam"], "t_base_cam");
  cfg.t_eef_obj = parse_pose(j["t_eef_obj"], "t_eef_obj");
  if (j.contains("rate_hz")) {
    if (!j["rate_hz"].is_number() || j["rate_hz"].get<double>() <= 0.0) {
      throw ConfigError(path + ": 'rate_hz' must be a positive number");
    }
    cfg.rate_hz = j["rate_hz"].get<double>();
  }
  return cfg;
}

}  // namespace cuetrack

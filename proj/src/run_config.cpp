#include "cuetrack/run_config.hpp"

#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

namespace cuetrack {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path, const std::string& section) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(path + ": unknown key '" + section + key + "'");
    }
  }
}

double require_number(const json& obj, const char* key, double fallback, const std::string& path,
                      const std::string& section) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError(path + ": '" + section + key + "' must be a number");
  }
  return obj[key].get<double>();
}

bool require_bool(const json& obj, const char* key, bool fallback, const std::string& path,
                  const std::string& section) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) {
    throw ConfigError(path + ": '" + section + key + "' must be a boolean");
  }
  return obj[key].get<bool>();
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path + ": cannot open config file");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError(path + ": config must be a JSON object");
  }

  RunConfig cfg;
  reject_unknown(j,
                 {"schema_version", "seed", "parallelism", "icp", "anchor", "smoothing",
                  "loss_weights"},
                 path, "");

  cfg.seed = static_cast<unsigned>(require_number(j, "seed", cfg.seed, path, ""));
  cfg.parallelism =
      static_cast<int>(require_number(j, "parallelism", cfg.parallelism, path, ""));

  if (j.contains("icp")) {
    const json& icp = j["icp"];
    reject_unknown(icp,
                   {"max_iterations", "convergence_tol", "max_points", "min_points",
                    "subsample_seed"},
                   path, "icp.");
    auto& c = cfg.track.icp;
    c.max_iterations =
        static_cast<int>(require_number(icp, "max_iterations", c.max_iterations, path, "icp."));
    c.convergence_tol = require_number(icp, "convergence_tol", c.convergence_tol, path, "icp.");
    c.max_points = static_cast<int>(require_number(icp, "max_points", c.max_points, path, "icp."));
    c.min_points = static_cast<int>(require_number(icp, "min_points", c.min_points, path, "icp."));
    c.subsample_seed = static_cast<unsigned>(
        require_number(icp, "subsample_seed", c.subsample_seed, path, "icp."));
    c.validate();
  }
  // A single top-level seed also drives ICP subsampling unless the icp
  // section pinned its own.
  if (!j.contains("icp") || !j["icp"].contains("subsample_seed")) {
    cfg.track.icp.subsample_seed = cfg.seed;
  }

  if (j.contains("anchor")) {
    const json& a = j["anchor"];
    reject_unknown(a, {"enabled", "period", "window", "blend_span"}, path, "anchor.");
    cfg.track.anchoring = require_bool(a, "enabled", cfg.track.anchoring, path, "anchor.");
    cfg.track.anchor.period =
        static_cast<int>(require_number(a, "period", cfg.track.anchor.period, path, "anchor."));
    cfg.track.anchor.anchor_window = static_cast<int>(
        require_number(a, "window", cfg.track.anchor.anchor_window, path, "anchor."));
    cfg.track.anchor.blend_span = static_cast<int>(
        require_number(a, "blend_span", cfg.track.anchor.blend_span, path, "anchor."));
    cfg.track.anchor.validate();
  }

  if (j.contains("smoothing")) {
    const json& s = j["smoothing"];
    reject_unknown(s, {"enabled", "rotation_window", "translation_window"}, path, "smoothing.");
    cfg.track.smoothing = require_bool(s, "enabled", cfg.track.smoothing, path, "smoothing.");
    cfg.track.smooth_rotation_window = static_cast<int>(require_number(
        s, "rotation_window", cfg.track.smooth_rotation_window, path, "smoothing."));
    cfg.track.smooth_translation_window = static_cast<int>(require_number(
        s, "translation_window", cfg.track.smooth_translation_window, path, "smoothing."));
  }

  if (j.contains("loss_weights")) {
    const json& w = j["loss_weights"];
    reject_unknown(w, {"lambda_trans", "lambda_cons", "lambda_smooth", "lambda_bound"}, path,
                   "loss_weights.");
    cfg.loss_weights.lambda_trans =
        require_number(w, "lambda_trans", cfg.loss_weights.lambda_trans, path, "loss_weights.");
    cfg.loss_weights.lambda_cons =
        require_number(w, "lambda_cons", cfg.loss_weights.lambda_cons, path, "loss_weights.");
    cfg.loss_weights.lambda_smooth =
        require_number(w, "lambda_smooth", cfg.loss_weights.lambda_smooth, path, "loss_weights.");
    cfg.loss_weights.lambda_bound =
        require_number(w, "lambda_bound", cfg.loss_weights.lambda_bound, path, "loss_weights.");
    cfg.loss_weights.validate();
  }

  cfg.track.parallelism = cfg.parallelism;
  return cfg;
}

}  // namespace cuetrack

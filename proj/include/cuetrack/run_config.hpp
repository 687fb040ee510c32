#pragma once

#include <string>

#include "cuetrack/objective.hpp"
#include "cuetrack/tracker.hpp"

namespace cuetrack {

/// Aggregated module configuration for the CLI. Loaded from a single JSON
/// file; unknown keys anywhere in the document are rejected with a
/// diagnostic naming them.
struct RunConfig {
  unsigned seed = 0;
  int parallelism = 0;  // 0 = all cores
  TrackOptions track;
  LossWeights loss_weights;

  static RunConfig defaults() { return {}; }
};

RunConfig load_run_config(const std::string& path);

}  // namespace cuetrack

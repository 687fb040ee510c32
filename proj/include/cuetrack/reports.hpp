#pragma once

#include <string>

#include "cuetrack/metrics.hpp"
#include "cuetrack/objective.hpp"

namespace cuetrack {

// Metrics report as JSON (schema_version 1) with per-window breakdowns and a
// human-readable table. The JSON embeds per-frame errors when the report
// carries them, which is what cmd_plot_data consumes.
std::string metrics_report_to_json(const MetricsReport& report);
std::string metrics_report_table(const MetricsReport& report);

std::string objective_report_to_json(const ObjectiveReport& report);
std::string objective_report_table(const ObjectiveReport& report);

}  // namespace cuetrack

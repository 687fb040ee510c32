#include "cuetrack/reports.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace cuetrack {

namespace {

using nlohmann::json;

json quat_json(const UnitQuaternion& q) {
  return json::array({q.w(), q.x(), q.y(), q.z()});
}

json vec3_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

const char* space_name(TranslationSpace s) {
  return s == TranslationSpace::kImagePixels ? "image_px" : "scene_3d";
}

json breakdown_json(const ObjectiveBreakdown& b) {
  json j{{"rot", b.rot},       {"trans", b.trans},   {"cons", b.cons},
         {"smooth", b.smooth}, {"total", b.total},   {"trans_space", space_name(b.trans_space)},
         {"bound_available", b.bound_available}};
  if (b.bound_available) {
    j["bound"] = b.bound;
  } else {
    j["bound"] = nullptr;
  }
  return j;
}

}  // namespace

std::string metrics_report_to_json(const MetricsReport& r) {
  json j;
  j["schema_version"] = 1;
  j["type"] = "metrics_report";
  j["rre_deg"] = r.rre_deg;
  j["rte"] = r.rte;
  j["are_deg"] = r.are_deg;
  j["ate"] = r.ate;
  j["tcc_r"] = r.tcc_r;
  j["tcc_t"] = r.tcc_t;
  j["tcc_axes"] = {
      {"rot", vec3_json(r.tcc_axes.rot)},
      {"trans", vec3_json(r.tcc_axes.trans)},
      {"rot_flagged", json::array({r.tcc_axes.rot_flagged[0], r.tcc_axes.rot_flagged[1],
                                   r.tcc_axes.rot_flagged[2]})},
      {"trans_flagged", json::array({r.tcc_axes.trans_flagged[0], r.tcc_axes.trans_flagged[1],
                                     r.tcc_axes.trans_flagged[2]})},
  };
  j["frames"] = r.frames;
  j["alignment"] = {
      {"first_frame_aligned", r.first_frame_aligned},
      {"first_frame_offset", quat_json(r.first_frame_offset)},
      {"umeyama_applied", r.umeyama_applied},
      {"umeyama_skipped_degenerate", r.umeyama_skipped_degenerate},
      {"umeyama",
       {{"scale", r.umeyama.scale},
        {"rotation", quat_json(quat_from_matrix(r.umeyama.rotation))},
        {"translation", vec3_json(r.umeyama.translation)}}},
  };
  if (!r.per_frame.empty()) {
    json pf = json::array();
    for (const auto& e : r.per_frame) {
      pf.push_back({{"frame", e.frame}, {"trans_err", e.trans_err},
                    {"rot_err_deg", e.rot_err_deg}});
    }
    j["per_frame"] = std::move(pf);
  }
  return j.dump(2);
}

std::string metrics_report_table(const MetricsReport& r) {
  std::ostringstream out;
  out << "metric     value\n";
  out << "---------  ----------\n";
  char buf[64];
  auto row = [&](const char* name, double v) {
    std::snprintf(buf, sizeof(buf), "%-9s  %.6g\n", name, v);
    out << buf;
  };
  row("RRE (deg)", r.rre_deg);
  row("RTE", r.rte);
  row("ARE (deg)", r.are_deg);
  row("ATE", r.ate);
  row("TCC_R", r.tcc_r);
  row("TCC_T", r.tcc_t);
  out << "frames     " << r.frames << "\n";
  out << "alignment  first_frame=" << (r.first_frame_aligned ? "yes" : "no")
      << " umeyama=" << (r.umeyama_applied ? "yes" : (r.umeyama_skipped_degenerate
                                                          ? "skipped(degenerate)"
                                                          : "no"))
      << "\n";
  return out.str();
}

std::string objective_report_to_json(const ObjectiveReport& r) {
  json j;
  j["schema_version"] = 1;
  j["type"] = "objective_report";
  j["weights"] = {{"lambda_trans", r.weights.lambda_trans},
                  {"lambda_cons", r.weights.lambda_cons},
                  {"lambda_smooth", r.weights.lambda_smooth},
                  {"lambda_bound", r.weights.lambda_bound}};
  j["aggregate"] = breakdown_json(r.aggregate);
  json windows = json::array();
  for (const auto& w : r.windows) {
    json jw = breakdown_json(w.breakdown);
    jw["a"] = w.window.a;
    jw["b"] = w.window.b;
    jw["c"] = w.window.c;
    windows.push_back(std::move(jw));
  }
  j["windows"] = std::move(windows);
  return j.dump(2);
}

std::string objective_report_table(const ObjectiveReport& r) {
  std::ostringstream out;
  out << "windows: " << r.windows.size() << "\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "aggregate: rot=%.6g trans=%.6g(%s) cons=%.6g smooth=%.6g bound=%s total=%.6g\n",
                r.aggregate.rot, r.aggregate.trans, space_name(r.aggregate.trans_space),
                r.aggregate.cons, r.aggregate.smooth,
                r.aggregate.bound_available ? std::to_string(r.aggregate.bound).c_str() : "n/a",
                r.aggregate.total);
  out << buf;
  return out.str();
}

}  // namespace cuetrack

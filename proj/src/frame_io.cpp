#include "cuetrack/frame_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "cuetrack/trajectory_io.hpp"

namespace cuetrack {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

[[noreturn]] void fail(const std::string& path, long line, const std::string& detail) {
  throw SchemaError(path + ":" + std::to_string(line) + ": " + detail);
}

template <int Cols>
Eigen::Matrix<double, Eigen::Dynamic, Cols> parse_matrix(const json& arr, const std::string& path,
                                                         long line, const char* field) {
  if (!arr.is_array()) {
    fail(path, line, std::string("field '") + field + "' must be an array of rows");
  }
  Eigen::Matrix<double, Eigen::Dynamic, Cols> out(static_cast<Eigen::Index>(arr.size()), Cols);
  for (size_t r = 0; r < arr.size(); ++r) {
    if (!arr[r].is_array() || arr[r].size() != Cols) {
      fail(path, line,
           std::string("field '") + field + "' row " + std::to_string(r) + " must have " +
               std::to_string(Cols) + " numbers");
    }
    for (int c = 0; c < Cols; ++c) {
      if (!arr[r][static_cast<size_t>(c)].is_number()) {
        fail(path, line, std::string("field '") + field + "' contains a non-numeric value");
      }
      out(static_cast<Eigen::Index>(r), c) = arr[r][static_cast<size_t>(c)].get<double>();
    }
  }
  return out;
}

}  // namespace

std::vector<FrameRecord> read_frames_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError(path + ": cannot open frames file");
  }
  std::vector<FrameRecord> out;
  std::set<int> seen;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      fail(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) {
      fail(path, line_no, "record is not an object");
    }
    if (rec.contains("type")) continue;  // schema header line
    if (!rec.contains("frame") || !rec["frame"].is_number_integer()) {
      fail(path, line_no, "missing integer field 'frame'");
    }
    FrameRecord fr;
    fr.frame = rec["frame"].get<int>();
    if (!seen.insert(fr.frame).second) {
      fail(path, line_no, "duplicate frame index " + std::to_string(fr.frame));
    }
    if (rec.contains("object_points") && !rec["object_points"].is_null()) {
      fr.object_points = parse_matrix<3>(rec["object_points"], path, line_no, "object_points");
    }
    if (rec.contains("hand_joints_3d") && !rec["hand_joints_3d"].is_null()) {
      const auto m = parse_matrix<3>(rec["hand_joints_3d"], path, line_no, "hand_joints_3d");
      if (m.rows() != HandJoints::kNumJoints) {
        fail(path, line_no, "hand_joints_3d must have exactly 21 rows");
      }
      fr.hand_joints_3d = m;
    }
    if (rec.contains("hand_joints_2d") && !rec["hand_joints_2d"].is_null()) {
      const auto m = parse_matrix<2>(rec["hand_joints_2d"], path, line_no, "hand_joints_2d");
      if (m.rows() != HandJoints::kNumJoints) {
        fail(path, line_no, "hand_joints_2d must have exactly 21 rows");
      }
      fr.hand_joints_2d = m;
    }
    if (rec.contains("intrinsics") && !rec["intrinsics"].is_null()) {
      const json& intr = rec["intrinsics"];
      for (const char* k : {"fx", "fy", "cx", "cy"}) {
        if (!intr.contains(k) || !intr[k].is_number()) {
          fail(path, line_no, std::string("intrinsics missing numeric field '") + k + "'");
        }
      }
      fr.intrinsics = Intrinsics{intr["fx"].get<double>(), intr["fy"].get<double>(),
                                 intr["cx"].get<double>(), intr["cy"].get<double>()};
    }
    out.push_back(std::move(fr));
  }
  std::sort(out.begin(), out.end(),
            [](const FrameRecord& a, const FrameRecord& b) { return a.frame < b.frame; });
  return out;
}

void write_frames_jsonl(const std::vector<FrameRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw SchemaError(path + ": cannot open for writing");
  }
  out << R"({"schema_version":)" << kSchemaVersion << R"(,"type":"frames"})" << "\n";
  for (const auto& rec : records) {
    out << "{\"frame\":" << rec.frame << ",\"object_points\":[";
    for (Eigen::Index r = 0; r < rec.object_points.rows(); ++r) {
      if (r > 0) out << ',';
      out << '[' << format_double(rec.object_points(r, 0)) << ','
          << format_double(rec.object_points(r, 1)) << ','
          << format_double(rec.object_points(r, 2)) << ']';
    }
    out << "]";
    if (rec.hand_joints_3d.has_value()) {
      out << ",\"hand_joints_3d\":[";
      for (int r = 0; r < HandJoints::kNumJoints; ++r) {
        if (r > 0) out << ',';
        out << '[' << format_double((*rec.hand_joints_3d)(r, 0)) << ','
            << format_double((*rec.hand_joints_3d)(r, 1)) << ','
            << format_double((*rec.hand_joints_3d)(r, 2)) << ']';
      }
      out << "]";
    }
    if (rec.hand_joints_2d.has_value()) {
      out << ",\"hand_joints_2d\":[";
      for (int r = 0; r < HandJoints::kNumJoints; ++r) {
        if (r > 0) out << ',';
        out << '[' << format_double((*rec.hand_joints_2d)(r, 0)) << ','
            << format_double((*rec.hand_joints_2d)(r, 1)) << ']';
      }
      out << "]";
    }
    if (rec.intrinsics.has_value()) {
      out << ",\"intrinsics\":{\"fx\":" << format_double(rec.intrinsics->fx)
          << ",\"fy\":" << format_double(rec.intrinsics->fy)
          << ",\"cx\":" << format_double(rec.intrinsics->cx)
          << ",\"cy\":" << format_double(rec.intrinsics->cy) << "}";
    }
    out << "}\n";
  }
}

std::vector<FrameObservation> to_observations(const std::vector<FrameRecord>& records) {
  std::vector<FrameObservation> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    FrameObservation obs;
    obs.frame_index = rec.frame;
    obs.cloud = PointCloud(rec.object_points, rec.frame);
    if (rec.hand_joints_3d.has_value()) {
      obs.hand = HandJoints(*rec.hand_joints_3d);
    }
    out.push_back(std::move(obs));
  }
  return out;
}

}  // namespace cuetrack

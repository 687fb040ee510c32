#include "cuetrack/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cuetrack/errors.hpp"

namespace cuetrack {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr const char* kCsvHeader = "frame,qw,qx,qy,qz,tx,ty,tz,flags";

[[noreturn]] void fail(const std::string& path, long line, const std::string& detail) {
  throw SchemaError(path + ":" + std::to_string(line) + ": " + detail);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) {
    throw SchemaError(path + ": cannot open for writing");
  }
  out << "# schema_version: " << kSchemaVersion << "\n";
  for (const auto& c : header_comments) {
    out << "# " << c << "\n";
  }
  out << kCsvHeader << "\n";
  char flags_buf[16];
  for (const auto& e : traj.entries()) {
    const auto q = e.pose.rotation.coeffs_wxyz();
    std::snprintf(flags_buf, sizeof(flags_buf), "%x", e.flags);
    out << e.frame << ',' << format_double(q[0]) << ',' << format_double(q[1]) << ','
        << format_double(q[2]) << ',' << format_double(q[3]) << ','
        << format_double(e.pose.translation.x()) << ',' << format_double(e.pose.translation.y())
        << ',' << format_double(e.pose.translation.z()) << ',' << flags_buf << "\n";
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError(path + ": cannot open");
  }
  Trajectory traj;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) {
        fail(path, line_no, "expected header '" + std::string(kCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (cols.size() != 9) {
      fail(path, line_no, "expected 9 columns, got " + std::to_string(cols.size()));
    }
    TrajectoryEntry e;
    try {
      e.frame = std::stoi(cols[0]);
      const double qw = std::stod(cols[1]);
      const double qx = std::stod(cols[2]);
      const double qy = std::stod(cols[3]);
      const double qz = std::stod(cols[4]);
      e.pose.rotation = UnitQuaternion(qw, qx, qy, qz);
      e.pose.translation = {std::stod(cols[5]), std::stod(cols[6]), std::stod(cols[7])};
      e.flags = static_cast<unsigned>(std::stoul(cols[8], nullptr, 16));
    } catch (const std::invalid_argument& ex) {
      fail(path, line_no, std::string("parse error: ") + ex.what());
    } catch (const std::out_of_range& ex) {
      fail(path, line_no, std::string("value out of range: ") + ex.what());
    }
    try {
      traj.push_back(e);
    } catch (const std::invalid_argument& ex) {
      fail(path, line_no, ex.what());
    }
  }
  if (!header_seen) {
    fail(path, line_no, "missing trajectory header");
  }
  return traj;
}

void write_trajectory_jsonl(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw SchemaError(path + ": cannot open for writing");
  }
  out << R"({"schema_version":)" << kSchemaVersion << R"(,"type":"trajectory"})" << "\n";
  for (const auto& e : traj.entries()) {
    const auto q = e.pose.rotation.coeffs_wxyz();
    out << "{\"frame\":" << e.frame << ",\"qw\":" << format_double(q[0])
        << ",\"qx\":" << format_double(q[1]) << ",\"qy\":" << format_double(q[2])
        << ",\"qz\":" << format_double(q[3]) << ",\"tx\":" << format_double(e.pose.translation.x())
        << ",\"ty\":" << format_double(e.pose.translation.y())
        << ",\"tz\":" << format_double(e.pose.translation.z()) << ",\"flags\":" << e.flags
        << "}\n";
  }
}

Trajectory read_trajectory_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError(path + ": cannot open");
  }
  Trajectory traj;
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
    if (rec.contains("type")) continue;  // schema header
    for (const char* field : {"frame", "qw", "qx", "qy", "qz", "tx", "ty", "tz"}) {
      if (!rec.contains(field) || !rec[field].is_number()) {
        fail(path, line_no, std::string("missing numeric field '") + field + "'");
      }
    }
    TrajectoryEntry e;
    e.frame = rec["frame"].get<int>();
    try {
      e.pose.rotation = UnitQuaternion(rec["qw"].get<double>(), rec["qx"].get<double>(),
                                       rec["qy"].get<double>(), rec["qz"].get<double>());
    } catch (const std::invalid_argument& ex) {
      fail(path, line_no, ex.what());
    }
    e.pose.translation = {rec["tx"].get<double>(), rec["ty"].get<double>(),
                          rec["tz"].get<double>()};
    e.flags = rec.value("flags", 0u);
    try {
      traj.push_back(e);
    } catch (const std::invalid_argument& ex) {
      fail(path, line_no, ex.what());
    }
  }
  return traj;
}

}  // namespace cuetrack

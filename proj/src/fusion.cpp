#include "cuetrack/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace cuetrack {

namespace {

using nlohmann::json;

double nearest_rank_percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t rank = static_cast<size_t>(
      std::ceil(p * static_cast<double>(values.size())));
  const size_t idx = rank == 0 ? 0 : rank - 1;
  return values[std::min(idx, values.size() - 1)];
}

[[noreturn]] void schema_fail(const std::string& path, long line, const std::string& detail) {
  throw SchemaError(path + ":" + std::to_string(line) + ": " + detail);
}

}  // namespace

HeuristicProvider::HeuristicProvider(const std::vector<FrameObservation>& observations,
                                     Config cfg) {
  if (observations.empty()) {
    throw std::invalid_argument("HeuristicProvider: empty observation sequence");
  }
  std::vector<double> counts;
  counts.reserve(observations.size());
  for (const auto& obs : observations) {
    counts_[obs.frame_index] = static_cast<double>(obs.cloud.size());
    counts.push_back(static_cast<double>(obs.cloud.size()));
  }
  k_ref_ = nearest_rank_percentile(std::move(counts), cfg.percentile);
}

double HeuristicProvider::alpha(int i, int j) const {
  const auto it_i = counts_.find(i);
  const auto it_j = counts_.find(j);
  const double k_i = it_i == counts_.end() ? 0.0 : it_i->second;
  const double k_j = it_j == counts_.end() ? 0.0 : it_j->second;
  const double visible_ratio = k_ref_ > 0.0 ? std::min(k_i, k_j) / k_ref_ : 0.0;
  return 1.0 - std::min(1.0, visible_ratio);
}

CueProviderOutput heuristic_provider(const std::vector<FrameObservation>& observations,
                                     HeuristicProvider::Config cfg) {
  HeuristicProvider provider(observations, cfg);
  CueProviderOutput out;
  for (size_t k = 0; k + 1 < observations.size(); ++k) {
    const PairKey key{observations[k].frame_index, observations[k + 1].frame_index};
    out.alpha[key] = provider.alpha(key.i, key.j);
    out.weights[key] = provider.weights(key.i, key.j);
  }
  for (const auto& obs : observations) {
    out.delta[obs.frame_index] = Eigen::Vector3d::Zero();
  }
  return out;
}

FileProvider::FileProvider(CueProviderOutput data, std::shared_ptr<const CueProvider> fallback)
    : data_(std::move(data)), fallback_(std::move(fallback)) {}

CueProviderOutput FileProvider::parse_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError(path + ": cannot open sidecar file");
  }
  CueProviderOutput out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      schema_fail(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) {
      schema_fail(path, line_no, "record is not an object");
    }
    if (rec.contains("i") || rec.contains("j") || rec.contains("alpha") ||
        rec.contains("weights")) {
      if (!rec.contains("i") || !rec.contains("j")) {
        schema_fail(path, line_no, "pair record missing field 'i' or 'j'");
      }
      if (!rec["i"].is_number_integer() || !rec["j"].is_number_integer()) {
        schema_fail(path, line_no, "fields 'i'/'j' must be integers");
      }
      const PairKey key{rec["i"].get<int>(), rec["j"].get<int>()};
      if (rec.contains("alpha")) {
        if (!rec["alpha"].is_number()) {
          schema_fail(path, line_no, "field 'alpha' must be a number");
        }
        const double a = rec["alpha"].get<double>();
        if (a < -1e-6 || a > 1.0 + 1e-6) {
          throw RangeError(path + ":" + std::to_string(line_no) +
                           ": alpha outside [0,1] beyond 1e-6 slack");
        }
        out.alpha[key] = std::clamp(a, 0.0, 1.0);
      }
      if (rec.contains("weights")) {
        if (!rec["weights"].is_array() ||
            rec["weights"].size() != HandJoints::kNumJoints) {
          schema_fail(path, line_no, "field 'weights' must be an array of 21 numbers");
        }
        JointWeights::Vector w;
        for (int l = 0; l < HandJoints::kNumJoints; ++l) {
          if (!rec["weights"][static_cast<size_t>(l)].is_number()) {
            schema_fail(path, line_no, "field 'weights' must contain numbers");
          }
          w[l] = rec["weights"][static_cast<size_t>(l)].get<double>();
        }
        try {
          out.weights[key] = JointWeights(w);
        } catch (const std::invalid_argument& e) {
          schema_fail(path, line_no, std::string("field 'weights': ") + e.what());
        }
      }
    } else if (rec.contains("frame") || rec.contains("delta")) {
      if (!rec.contains("frame") || !rec["frame"].is_number_integer()) {
        schema_fail(path, line_no, "delta record missing integer field 'frame'");
      }
      if (!rec.contains("delta") || !rec["delta"].is_array() || rec["delta"].size() != 3) {
        schema_fail(path, line_no, "delta record missing 3-vector field 'delta'");
      }
      Eigen::Vector3d d;
      for (int k = 0; k < 3; ++k) {
        if (!rec["delta"][static_cast<size_t>(k)].is_number()) {
          schema_fail(path, line_no, "field 'delta' must contain numbers");
        }
        d[k] = rec["delta"][static_cast<size_t>(k)].get<double>();
      }
      out.delta[rec["frame"].get<int>()] = d;
    }
    // Records with only unknown fields (for instance a schema_version header)
    // are skipped; unknown fields inside known records are ignored.
  }
  return out;
}

double FileProvider::alpha(int i, int j) const {
  const auto it = data_.alpha.find(PairKey{i, j});
  if (it != data_.alpha.end()) return it->second;
  ++fallback_count_;
  return fallback_->alpha(i, j);
}

JointWeights FileProvider::weights(int i, int j) const {
  const auto it = data_.weights.find(PairKey{i, j});
  if (it != data_.weights.end()) return it->second;
  ++fallback_count_;
  return fallback_->weights(i, j);
}

Eigen::Vector3d FileProvider::delta(int frame) const {
  const auto it = data_.delta.find(frame);
  if (it != data_.delta.end()) return it->second;
  ++fallback_count_;
  return fallback_->delta(frame);
}

FusionResult fuse_rotation(const std::optional<RotationMatrix>& r_obj,
                           const std::optional<RotationMatrix>& r_hand, double alpha) {
  alpha = std::clamp(alpha, 0.0, 1.0);
  if (r_obj.has_value() && r_hand.has_value()) {
    const UnitQuaternion q_obj = quat_from_matrix(*r_obj);
    const UnitQuaternion q_hand = quat_from_matrix(*r_hand);
    if (alpha == 0.0) return {*r_obj, 0.0};
    if (alpha == 1.0) return {*r_hand, 1.0};
    return {slerp(q_obj, q_hand, alpha).to_matrix(), alpha};
  }
  if (r_obj.has_value()) return {*r_obj, 0.0};
  if (r_hand.has_value()) return {*r_hand, 1.0};
  throw NoCueAvailable("fuse_rotation: neither object nor hand cue available");
}

Eigen::Vector3d clamp_delta(const Eigen::Vector3d& delta, double sigma, bool* clamped) {
  const double cap = 2.0 * sigma;
  const double n = delta.norm();
  if (clamped != nullptr) *clamped = false;
  if (n <= cap || n == 0.0) {
    return delta;
  }
  if (clamped != nullptr) *clamped = true;
  return delta * (cap / n);
}

FusedTranslation fused_translation(const PointCloud& cloud, const Eigen::Vector3d& delta) {
  if (cloud.empty()) {
    throw EmptyCloud("fused_translation: empty point cloud");
  }
  FusedTranslation out;
  out.t = cloud.centroid() + clamp_delta(delta, cloud.scale(), &out.delta_clamped);
  return out;
}

}  // namespace cuetrack

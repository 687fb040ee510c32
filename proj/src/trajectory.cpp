#include "cuetrack/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace cuetrack {

Trajectory::Trajectory(std::vector<TrajectoryEntry> entries) : entries_(std::move(entries)) {
  for (size_t k = 1; k < entries_.size(); ++k) {
    if (entries_[k].frame <= entries_[k - 1].frame) {
      throw std::invalid_argument("Trajectory: frame indices must be strictly increasing");
    }
  }
}

void Trajectory::push_back(const TrajectoryEntry& e) {
  if (!entries_.empty() && e.frame <= entries_.back().frame) {
    throw std::invalid_argument("Trajectory: frame indices must be strictly increasing");
  }
  entries_.push_back(e);
}

const TrajectoryEntry* Trajectory::find(int frame) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), frame,
      [](const TrajectoryEntry& e, int f) { return e.frame < f; });
  if (it == entries_.end() || it->frame != frame) return nullptr;
  return &*it;
}

std::vector<int> Trajectory::frames() const {
  std::vector<int> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.frame);
  return out;
}

void AnchorConfig::validate() const {
  if (period < 2) throw ConfigError("AnchorConfig: period must be >= 2");
  if (anchor_window < 1) throw ConfigError("AnchorConfig: anchor_window must be >= 1");
  if (blend_span < 1) throw ConfigError("AnchorConfig: blend_span must be >= 1");
}

Trajectory compose(const Pose& initial_pose, std::span<const PairEstimate> pairs,
                   std::span<const FrameTranslation> translations, bool identity_fallback) {
  if (translations.empty()) {
    throw std::invalid_argument("compose: no frames");
  }
  if (pairs.size() + 1 != translations.size()) {
    throw std::invalid_argument("compose: pairs must cover consecutive frame gaps");
  }
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (pairs[k].i != translations[k].frame || pairs[k].j != translations[k + 1].frame) {
      throw std::invalid_argument("compose: pair keys do not match the frame sequence");
    }
  }

  const size_t n = translations.size();
  Trajectory out;
  UnitQuaternion rotation = initial_pose.rotation;
  for (size_t k = 0; k < n; ++k) {
    TrajectoryEntry e;
    e.frame = translations[k].frame;
    if (k > 0) {
      const PairEstimate& pair = pairs[k - 1];
      if (pair.r_fused.has_value()) {
        rotation = quat_from_matrix(*pair.r_fused) * rotation;
      } else if (identity_fallback) {
        e.flags |= kFlagInterpolated;  // identity step stands in for the missing pair
      } else {
        throw MissingPair("compose: no fused rotation for pair (" + std::to_string(pair.i) +
                          "," + std::to_string(pair.j) + ") and no fallback configured");
      }
    }
    e.pose.rotation = rotation;  // UnitQuaternion construction renormalizes each step
    out.push_back(e);
  }

  // Translations: measured values straight through, gaps linearly
  // interpolated in frame index (held at the ends), all gap fills flagged.
  auto& entries = out.entries();
  std::vector<size_t> valid;
  for (size_t k = 0; k < n; ++k) {
    if (translations[k].t.has_value()) valid.push_back(k);
  }
  if (valid.empty()) {
    // No measured translation anywhere: fall back to the initial pose.
    for (auto& e : entries) {
      e.pose.translation = initial_pose.translation;
      e.flags |= kFlagInterpolated;
    }
    return out;
  }
  for (size_t k = 0; k < n; ++k) {
    if (translations[k].t.has_value()) {
      entries[k].pose.translation = *translations[k].t;
      continue;
    }
    if (k == 0 && !translations[0].t.has_value()) {
      // Frame 0 prefers the supplied initial pose over extrapolation.
      entries[0].pose.translation = initial_pose.translation;
      entries[0].flags |= kFlagInterpolated;
      continue;
    }
    const auto next = std::lower_bound(valid.begin(), valid.end(), k);
    if (next == valid.begin()) {
      entries[k].pose.translation = *translations[valid.front()].t;
    } else if (next == valid.end()) {
      entries[k].pose.translation = *translations[valid.back()].t;
    } else {
      const size_t hi = *next;
      const size_t lo = *(next - 1);
      const double span = static_cast<double>(translations[hi].frame - translations[lo].frame);
      const double s = static_cast<double>(translations[k].frame - translations[lo].frame) / span;
      entries[k].pose.translation = (1.0 - s) * *translations[lo].t + s * *translations[hi].t;
    }
    entries[k].flags |= kFlagInterpolated;
  }
  return out;
}

Trajectory reanchor(const Trajectory& traj, const std::map<int, RotationMatrix>& anchor_estimates,
                    const AnchorConfig& cfg) {
  cfg.validate();
  Trajectory out = traj;
  auto& entries = out.entries();
  for (const auto& [anchor_frame, anchor_rot] : anchor_estimates) {
    const auto it = std::lower_bound(
        entries.begin(), entries.end(), anchor_frame,
        [](const TrajectoryEntry& e, int f) { return e.frame < f; });
    if (it == entries.end() || it->frame != anchor_frame) {
      throw AnchorOutOfRange("reanchor: anchor frame " + std::to_string(anchor_frame) +
                             " not in trajectory");
    }
    const UnitQuaternion current = it->pose.rotation;
    const UnitQuaternion correction = quat_from_matrix(anchor_rot) * current.inverse();
    const UnitQuaternion identity;
    const int span_start = anchor_frame - cfg.blend_span;
    for (auto& e : entries) {
      if (e.frame <= span_start) continue;
      if (e.frame <= anchor_frame) {
        const double s = static_cast<double>(e.frame - span_start) /
                         static_cast<double>(cfg.blend_span);
        e.pose.rotation = slerp(identity, correction, s) * e.pose.rotation;
        e.flags |= kFlagAnchored;
      } else {
        // Full correction past the anchor keeps relative rotations intact and
        // lets the next anchor correct only the drift accumulated since.
        e.pose.rotation = correction * e.pose.rotation;
      }
    }
  }
  return out;
}

UnitQuaternion quaternion_mean(const std::vector<UnitQuaternion>& qs) {
  if (qs.empty()) {
    throw std::invalid_argument("quaternion_mean: empty input");
  }
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  const Eigen::Vector4d ref = qs.front().coeffs_wxyz();
  for (const auto& q : qs) {
    Eigen::Vector4d v = q.coeffs_wxyz();
    if (v.dot(ref) < 0.0) v = -v;
    m.noalias() += v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
  Eigen::Vector4d mean = es.eigenvectors().col(3);
  if (mean.dot(ref) < 0.0) mean = -mean;
  return UnitQuaternion(mean[0], mean[1], mean[2], mean[3]);
}

Trajectory smooth(const Trajectory& traj, int rot_window, int trans_window) {
  if (rot_window < 1 || rot_window % 2 == 0 || trans_window < 1 || trans_window % 2 == 0) {
    throw ConfigError("smooth: windows must be odd and >= 1");
  }
  if (rot_window == 1 && trans_window == 1) {
    return traj;
  }
  const auto& in = traj.entries();
  const int n = static_cast<int>(in.size());
  Trajectory out = traj;
  auto& entries = out.entries();

  if (rot_window > 1) {
    const int h = (rot_window - 1) / 2;
    for (int k = 0; k < n; ++k) {
      const int lo = std::max(0, k - h);
      const int hi = std::min(n - 1, k + h);
      std::vector<UnitQuaternion> window;
      window.reserve(static_cast<size_t>(hi - lo + 1));
      window.push_back(in[static_cast<size_t>(k)].pose.rotation);  // center first: hemisphere ref
      for (int m = lo; m <= hi; ++m) {
        if (m == k) continue;
        window.push_back(in[static_cast<size_t>(m)].pose.rotation);
      }
      entries[static_cast<size_t>(k)].pose.rotation = quaternion_mean(window);
      entries[static_cast<size_t>(k)].flags |= kFlagSmoothed;
    }
  }
  if (trans_window > 1) {
    const int h = (trans_window - 1) / 2;
    for (int k = 0; k < n; ++k) {
      const int lo = std::max(0, k - h);
      const int hi = std::min(n - 1, k + h);
      Eigen::Vector3d sum = Eigen::Vector3d::Zero();
      for (int m = lo; m <= hi; ++m) {
        sum += in[static_cast<size_t>(m)].pose.translation;
      }
      entries[static_cast<size_t>(k)].pose.translation =
          sum / static_cast<double>(hi - lo + 1);
      entries[static_cast<size_t>(k)].flags |= kFlagSmoothed;
    }
  }
  return out;
}

}  // namespace cuetrack

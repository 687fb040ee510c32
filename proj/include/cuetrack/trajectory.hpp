#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cuetrack/fusion.hpp"
#include "cuetrack/geometry.hpp"

namespace cuetrack {

enum TrajectoryFlag : unsigned {
  kFlagInterpolated = 1u,  // pose (or part of it) filled in rather than estimated
  kFlagAnchored = 2u,      // rotation adjusted by a re-anchoring blend
  kFlagSmoothed = 4u,      // pose recomputed by temporal smoothing
};

struct TrajectoryEntry {
  int frame = 0;
  Pose pose;
  unsigned flags = 0;
};

/// Ordered sequence of (frame index, pose). Frame indices are strictly
/// increasing; gaps in the index values are allowed.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<TrajectoryEntry> entries);

  void push_back(const TrajectoryEntry& e);

  const std::vector<TrajectoryEntry>& entries() const { return entries_; }
  std::vector<TrajectoryEntry>& entries() { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const TrajectoryEntry& operator[](size_t k) const { return entries_[k]; }
  TrajectoryEntry& operator[](size_t k) { return entries_[k]; }

  // Entry with the given frame index, or nullptr.
  const TrajectoryEntry* find(int frame) const;

  std::vector<int> frames() const;

 private:
  std::vector<TrajectoryEntry> entries_;
};

struct AnchorConfig {
  int period = 30;       // K: anchor every K frames
  int anchor_window = 5; // half-width of the wider estimation window
  int blend_span = 30;   // frames over which a correction is slerp-distributed

  void validate() const;
};

/// Per-frame translation input for compose(); nullopt marks a frame whose
/// translation could not be measured (empty cloud).
struct FrameTranslation {
  int frame = 0;
  std::optional<Eigen::Vector3d> t;
};

/// Chain relative rotations left-to-right from the initial rotation
/// (R_k = R_rel(k-1,k) * R_{k-1}) and take translations from the per-frame
/// stream. Invalid translations are linearly interpolated from the nearest
/// valid neighbors (held at the ends) and flagged. A pair without a fused
/// rotation uses the identity step and flags the frame when
/// identity_fallback is set; otherwise compose throws MissingPair.
/// The initial pose's translation is only consulted when frame 0 has no
/// measured translation.
Trajectory compose(const Pose& initial_pose, std::span<const PairEstimate> pairs,
                   std::span<const FrameTranslation> translations,
                   bool identity_fallback = true);

/// Apply wide-window anchor corrections. For each anchor frame a (ascending),
/// the correction C = R_anchor * current(a)^T is slerp-blended over the
/// preceding blend_span (s = 0 at the span start, s = 1 at the anchor) and
/// applied in full to every frame after a, so later anchors correct only the
/// drift accumulated since the previous one and no adjacent-frame jump larger
/// than angle(C)/blend_span is introduced. Frames before the first blend span
/// are untouched. Throws AnchorOutOfRange for an anchor frame absent from the
/// trajectory.
Trajectory reanchor(const Trajectory& traj, const std::map<int, RotationMatrix>& anchor_estimates,
                    const AnchorConfig& cfg);

/// Sliding-window smoothing: rotations via the chordal quaternion mean
/// (largest eigenvector of the window's sum qq^T, hemisphere-aligned to the
/// window center), translations via a centered moving average. Windows must
/// be odd and >= 1; endpoints use truncated windows; window 1 is the
/// identity.
Trajectory smooth(const Trajectory& traj, int rot_window, int trans_window);

// Chordal mean of a set of quaternions (hemisphere-aligned to the first).
UnitQuaternion quaternion_mean(const std::vector<UnitQuaternion>& qs);

}  // namespace cuetrack

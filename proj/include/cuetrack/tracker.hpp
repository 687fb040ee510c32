#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuetrack/alignment.hpp"
#include "cuetrack/fusion.hpp"
#include "cuetrack/trajectory.hpp"

namespace cuetrack {

struct TrackOptions {
  IcpConfig icp;
  AnchorConfig anchor;
  bool anchoring = false;
  bool smoothing = false;
  int smooth_rotation_window = 5;
  int smooth_translation_window = 5;
  Pose initial_pose;
  int parallelism = 0;  // 0 = hardware concurrency
  bool identity_fallback = true;

  // Diagnostics: override the provider's blending coefficient everywhere
  // (0 = object-only, 1 = hand-only).
  std::optional<double> force_alpha;
};

struct PairLog {
  int i = 0;
  int j = 0;
  bool object_available = false;
  bool hand_available = false;
  bool fused_available = false;
  double alpha_requested = 0.0;
  double alpha_effective = 0.0;
  int icp_iterations = 0;
  double icp_residual = 0.0;
  bool icp_degenerate = false;
  std::string note;  // InsufficientPoints / DegenerateJoints / fallback details
};

struct FrameLog {
  int frame = 0;
  bool translation_valid = true;
  bool delta_clamped = false;
};

struct AnchorLog {
  int frame = 0;
  int candidates = 0;
  double correction_deg = 0.0;
};

struct RunLog {
  std::vector<PairLog> pairs;
  std::vector<FrameLog> frames;
  std::vector<AnchorLog> anchors;

  void write_jsonl(const std::string& path) const;
};

struct TrackResult {
  Trajectory trajectory;
  std::vector<PairEstimate> pairs;
  RunLog log;
};

/// End-to-end tracking: per-pair ICP + weighted Procrustes cues fused by the
/// provider's alpha, centroid+delta translations, composition from the
/// initial pose, then optional re-anchoring (wide-pair chordal-mean anchors
/// every anchor.period frames) and smoothing. Pair estimation fans out over
/// `parallelism` threads; results are merged by pair index so the output is
/// identical for any thread count.
TrackResult track(const std::vector<FrameObservation>& observations, const CueProvider& provider,
                  const TrackOptions& options);

}  // namespace cuetrack

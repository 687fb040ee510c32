#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cuetrack/observation.hpp"
#include "cuetrack/trajectory.hpp"

namespace cuetrack {

/// Parametric rigid motion: a per-frame rotation step about a fixed axis with
/// an optionally sinusoidal rate, and a linear translation with optional
/// per-axis sinusoidal components (phased so TCC sees per-axis variation).
struct MotionSpec {
  Eigen::Vector3d rot_axis{0.4, 1.0, -0.6};
  double rot_rate_deg = 3.0;        // degrees per frame
  double rot_rate_sin_amp = 0.0;    // fractional rate modulation
  double rot_rate_sin_period = 40.0;
  Eigen::Vector3d trans_vel{0.002, -0.001, 0.0015};  // units per frame
  Eigen::Vector3d trans_sin_amp = Eigen::Vector3d::Zero();
  double trans_sin_period = 60.0;
};

struct SynthConfig {
  int n_frames = 200;
  int n_points = 2000;
  MotionSpec motion;

  // Per-frame visible fraction. When `occlusion_schedule` is empty it is
  // built from the two fractions and grasp_frame.
  std::vector<double> occlusion_schedule;
  double visible_before_grasp = 1.0;
  double visible_after_grasp = 1.0;
  int grasp_frame = 0;  // hand moves rigidly with the object from here on

  double point_noise_sigma = 0.0;
  double joint_noise_sigma = 0.0;
  unsigned seed = 1;

  // Stress mode: plain box without the symmetry-breaking notch.
  bool symmetric_shape = false;

  void validate() const;
};

struct SynthSequence {
  std::vector<FrameObservation> observations;
  Trajectory ground_truth;  // pose at frame 0 is the identity by construction
};

/// Deterministic hand-object interaction sequence: points sampled on a
/// unit-scale box with a corner notch (centroid at the origin, so the
/// ground-truth translation is exactly the full-cloud centroid path),
/// transformed by the ground-truth motion, occluded by a body-fixed wobbling
/// plane cut to the scheduled visible fraction, then perturbed by Gaussian
/// noise. Hand joints articulate freely while approaching and become rigid
/// with the object after grasp_frame. Identical configs produce identical
/// sequences byte for byte.
SynthSequence generate(const SynthConfig& cfg);

SynthConfig load_synth_config(const std::string& path);

// Frame records + ground truth written to dir/frames.jsonl and
// dir/gt_trajectory.csv.
void write_synth_sequence(const SynthSequence& seq, const std::string& dir);

}  // namespace cuetrack

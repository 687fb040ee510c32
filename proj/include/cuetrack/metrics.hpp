#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "cuetrack/alignment.hpp"
#include "cuetrack/trajectory.hpp"

namespace cuetrack {

struct PerFrameError {
  int frame = 0;
  double trans_err = 0.0;    // ||t - t_hat||, scene units, after alignment
  double rot_err_deg = 0.0;  // geodesic angle, degrees, after alignment
};

struct TccAxes {
  Eigen::Vector3d rot = Eigen::Vector3d::Zero();
  Eigen::Vector3d trans = Eigen::Vector3d::Zero();
  std::array<bool, 3> rot_flagged = {false, false, false};    // zero-variance axes
  std::array<bool, 3> trans_flagged = {false, false, false};
};

struct TccResult {
  double tcc_r = 0.0;
  double tcc_t = 0.0;
  TccAxes axes;
};

struct MetricsReport {
  double rre_deg = 0.0;
  double rte = 0.0;
  double are_deg = 0.0;
  double ate = 0.0;
  double tcc_r = 0.0;
  double tcc_t = 0.0;
  TccAxes tcc_axes;
  int frames = 0;

  // Alignment metadata.
  bool first_frame_aligned = false;
  UnitQuaternion first_frame_offset;
  bool umeyama_applied = false;
  bool umeyama_skipped_degenerate = false;
  SimilarityTransform umeyama;

  std::vector<PerFrameError> per_frame;
};

/// RRE (degrees) and RTE over consecutive-frame deltas of the common frames:
/// RTE = mean ||dt_i - dt_hat_i||, RRE = mean arccos((tr(dR_i^T dR_hat_i)-1)/2)
/// with dR_i = R_i^T R_{i+1}. Both are invariant to constant global offsets.
/// Throws TooFewFrames below 2 common frames.
std::pair<double, double> relative_errors(const Trajectory& predicted,
                                          const Trajectory& reference);

/// ARE (degrees, mean geodesic angle) and ATE (RMSE of translation error).
/// Expects the predicted trajectory to be aligned already (evaluate() does
/// this). Throws TooFewFrames below 1 common frame.
std::pair<double, double> absolute_errors(const Trajectory& predicted,
                                          const Trajectory& reference);

/// Pearson correlation of per-frame motion deltas, averaged over the three
/// axes: rotation on the components of log(dR_i), translation on dt_i. An
/// axis whose values have zero spread on either side contributes 0 and is
/// flagged. Throws TooFewFrames below 3 common frames.
TccResult tcc(const Trajectory& predicted, const Trajectory& reference);

struct EvalOptions {
  bool first_frame_align = true;
  bool umeyama = true;
  bool per_frame = true;
};

/// Full evaluation protocol: intersect frames, align the first frame's
/// rotation, Umeyama-align the translations (skipped with a flag when the
/// translation covariance is degenerate), then compute all metrics. Throws
/// NoCommonFrames when the trajectories share no frame.
MetricsReport evaluate(const Trajectory& predicted, const Trajectory& reference,
                       const EvalOptions& options = {});

}  // namespace cuetrack

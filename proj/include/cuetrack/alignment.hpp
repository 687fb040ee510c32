#pragma once

#include <utility>
#include <vector>

#include "cuetrack/geometry.hpp"
#include "cuetrack/observation.hpp"
#include "cuetrack/trajectory.hpp"

namespace cuetrack {

struct IcpConfig {
  int max_iterations = 50;
  double convergence_tol = 1e-6;  // radians of rotation change per iteration
  int max_points = 2048;          // subsample cap (uniform, seeded)
  int min_points = 30;
  unsigned subsample_seed = 0;

  void validate() const;
};

struct IcpReport {
  int iterations = 0;
  double mean_residual = 0.0;  // mean point distance at the final assignment, scene units
  bool converged = false;
  bool degenerate = false;     // rotation underdetermined (covariance rank < 2)
  std::vector<double> objective_history;  // mean squared residual per iteration
};

/// Rotation-only ICP between two centered clouds: iterates exact
/// nearest-neighbor assignment (kd-tree above 256 points) and the Kabsch
/// solve of sum_k ||R (p_k - p_mean) - (q_pi(k) - q_mean)||^2. Translation is
/// deliberately not estimated here; the fusion stage owns it through the
/// centroid path. Throws InsufficientPoints when either cloud is below
/// cfg.min_points.
std::pair<RotationMatrix, IcpReport> icp_rotation(const PointCloud& source,
                                                  const PointCloud& target,
                                                  const IcpConfig& cfg = {});

/// Weighted Procrustes: R = V diag(1,1,d) U^T with U S V^T the SVD of
/// sum_l w_l (J_i,l - anchor_i)(J_j,l - anchor_j)^T and d = sign(det(V U^T)),
/// so the result is always a proper rotation. The anchor is each frame's own
/// anchor joint (wrist by default). Throws DegenerateJoints when the weighted
/// covariance has rank < 2.
RotationMatrix weighted_procrustes(const HandJoints& joints_i, const HandJoints& joints_j,
                                   const JointWeights& w);

struct SimilarityTransform {
  double scale = 1.0;
  RotationMatrix rotation = RotationMatrix::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return scale * (rotation * p) + translation;
  }
};

/// Umeyama similarity alignment of the predicted translations onto the
/// reference: minimizes sum ||s R t_pred + t - t_ref||^2 with det(R) = +1.
/// Operates on the common frames of the two trajectories. Throws
/// DegenerateTrajectory when the predicted translation covariance has
/// rank < 2, and TooFewFrames below 3 common frames.
SimilarityTransform umeyama_align(const Trajectory& predicted, const Trajectory& reference);

// Similarity applied to every translation; rotations and flags untouched.
Trajectory apply_similarity(const Trajectory& traj, const SimilarityTransform& t);

/// Left-multiply every predicted rotation by R_ref,0 * R_pred,0^T so the
/// first common frame's rotations coincide. Throws EmptyTrajectory /
/// NoCommonFrames.
Trajectory first_frame_rotation_align(const Trajectory& predicted, const Trajectory& reference);

}  // namespace cuetrack

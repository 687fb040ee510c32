#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuetrack/geometry.hpp"
#include "cuetrack/trajectory.hpp"

namespace cuetrack {

/// Three-frame window a < b < c with the pair set {(a,b),(b,c),(a,c)}.
struct WindowSample {
  int a = 0;
  int b = 1;
  int c = 2;

  WindowSample() = default;
  WindowSample(int a_, int b_, int c_);

  std::array<std::pair<int, int>, 3> pairs() const {
    return {{{a, b}, {b, c}, {a, c}}};
  }
};

struct LossWeights {
  double lambda_trans = 10.0;
  double lambda_cons = 1.0;
  double lambda_smooth = 1.0;
  double lambda_bound = 1.0;

  void validate() const;
};

struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  void validate() const;
};

enum class TranslationSpace { kImagePixels, kScene3d };

struct TransLoss {
  double value = 0.0;
  TranslationSpace space = TranslationSpace::kScene3d;
};

// Relative rotation of the pair (u, v) in the world/camera frame:
// R_rel = R_v * R_u^T (the convention under which pairwise estimates compose
// into absolute rotations).
RotationMatrix relative_rotation_world(const Pose& pose_u, const Pose& pose_v);

/// Mean geodesic angle (radians) between predicted and reference relative
/// rotations over the window's pair set. Throws MissingFrame when any window
/// frame is absent from either trajectory.
double loss_rot(const WindowSample& window, const Trajectory& predicted,
                const Trajectory& reference);

/// Mean per-frame L1 distance of the translations over {a, b, c}. With
/// intrinsics the translations are projected through the pinhole model
/// (u = fx tx/tz + cx, v = fy ty/tz + cy; throws BehindCamera when
/// tz <= 1e-6); without intrinsics the distance is taken in 3D scene units
/// and the result tagged accordingly.
TransLoss loss_trans(const WindowSample& window, const Trajectory& predicted,
                     const Trajectory& reference, const std::optional<Intrinsics>& intr);

// || log((R_bc R_ab)^T R_ac) ||, radians.
double loss_cons(const RotationMatrix& r_ab, const RotationMatrix& r_bc,
                 const RotationMatrix& r_ac);

// || (t_c - t_b)/(c - b) - (t_b - t_a)/(b - a) ||, scene units per frame.
double loss_smooth(const Eigen::Vector3d& t_a, const Eigen::Vector3d& t_b,
                   const Eigen::Vector3d& t_c, int a, int b, int c);

// (max(0, ||delta|| - 0.5 sigma))^2.
double loss_bound(const Eigen::Vector3d& delta, double sigma);

// rot + lt*trans + lc*cons + ls*smooth + lb*bound.
double weighted_total(double rot, double trans, double cons, double smooth, double bound,
                      const LossWeights& w);

struct ObjectiveBreakdown {
  double rot = 0.0;
  double trans = 0.0;
  double cons = 0.0;
  double smooth = 0.0;
  double bound = 0.0;
  double total = 0.0;
  TranslationSpace trans_space = TranslationSpace::kScene3d;
  bool bound_available = false;
};

/// Weighted combination of all terms for one window. The bound term needs
/// per-frame (delta, sigma) inputs, which trajectories alone do not carry;
/// when absent it contributes zero and is marked unavailable. cons and smooth
/// are evaluated on the predicted trajectory (they measure its internal
/// consistency, not agreement with the reference).
ObjectiveBreakdown total_objective(
    const WindowSample& window, const Trajectory& predicted, const Trajectory& reference,
    const LossWeights& weights, const std::optional<Intrinsics>& intr = std::nullopt,
    const std::vector<std::pair<Eigen::Vector3d, double>>& delta_sigma = {});

struct WindowScore {
  WindowSample window;
  ObjectiveBreakdown breakdown;
};

struct ObjectiveReport {
  std::vector<WindowScore> windows;
  ObjectiveBreakdown aggregate;  // per-term means; total = weighted sum of means
  LossWeights weights;
};

ObjectiveReport score_windows(const Trajectory& predicted, const Trajectory& reference,
                              const std::vector<WindowSample>& windows,
                              const LossWeights& weights,
                              const std::optional<Intrinsics>& intr = std::nullopt);

/// Windows from a spec string over the given frame list:
///   "all"            every consecutive triple
///   "stride:N"       (a, a+N, a+2N) in index space for every valid a
///   "random:N:SEED"  N uniformly sampled triples a < b < c
std::vector<WindowSample> make_windows(const std::vector<int>& frames, const std::string& spec);

}  // namespace cuetrack

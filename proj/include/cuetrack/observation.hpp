#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "cuetrack/errors.hpp"

namespace cuetrack {

using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// Per-frame masked object points with cached centroid and scale statistics.
/// scale() is the standard deviation of the points about the centroid
/// (sqrt of the mean squared distance), used as the scale proxy for the
/// translation-residual bound.
class PointCloud {
 public:
  PointCloud() { recompute(); }

  explicit PointCloud(PointMatrix points, int frame_index = 0)
      : points_(std::move(points)), frame_index_(frame_index) {
    recompute();
  }

  const PointMatrix& points() const { return points_; }
  Eigen::Index size() const { return points_.rows(); }
  bool empty() const { return points_.rows() == 0; }

  void set_points(PointMatrix points) {
    points_ = std::move(points);
    recompute();
  }

  const Eigen::Vector3d& centroid() const { return centroid_; }
  double scale() const { return scale_; }

  int frame_index() const { return frame_index_; }
  void set_frame_index(int f) { frame_index_ = f; }

 private:
  void recompute() {
    if (points_.rows() == 0) {
      centroid_.setZero();
      scale_ = 0.0;
      return;
    }
    centroid_ = points_.colwise().mean().transpose();
    scale_ = std::sqrt((points_.rowwise() - centroid_.transpose()).squaredNorm() /
                       static_cast<double>(points_.rows()));
  }

  PointMatrix points_{0, 3};
  Eigen::Vector3d centroid_ = Eigen::Vector3d::Zero();
  double scale_ = 0.0;
  int frame_index_ = 0;
};

/// 21 hand joints in fixed skeletal order, wrist at index 0. The anchor joint
/// is subtracted before Procrustes alignment.
struct HandJoints {
  static constexpr int kNumJoints = 21;

  Eigen::Matrix<double, kNumJoints, 3> joints = Eigen::Matrix<double, kNumJoints, 3>::Zero();
  int anchor_index = 0;
  bool valid = true;

  HandJoints() = default;
  HandJoints(const Eigen::Matrix<double, kNumJoints, 3>& j, int anchor = 0, bool is_valid = true)
      : joints(j), anchor_index(anchor), valid(is_valid) {
    if (anchor_index < 0 || anchor_index >= kNumJoints) {
      throw std::invalid_argument("HandJoints: anchor_index out of [0,20]");
    }
  }

  Eigen::Vector3d anchor() const { return joints.row(anchor_index).transpose(); }
};

/// Nonnegative per-joint weights, renormalized to sum 1 at construction.
class JointWeights {
 public:
  using Vector = Eigen::Matrix<double, HandJoints::kNumJoints, 1>;

  JointWeights() : w_(Vector::Constant(1.0 / HandJoints::kNumJoints)) {}

  explicit JointWeights(const Vector& w) : w_(w) {
    if ((w_.array() < 0.0).any()) {
      throw std::invalid_argument("JointWeights: negative entry");
    }
    const double s = w_.sum();
    if (!(s > 0.0)) {
      throw std::invalid_argument("JointWeights: weights sum to zero");
    }
    w_ /= s;
  }

  static JointWeights uniform() { return JointWeights(); }

  const Vector& values() const { return w_; }
  double operator[](int i) const { return w_[i]; }

 private:
  Vector w_;
};

/// One frame's worth of input: object points plus (optionally) hand joints.
struct FrameObservation {
  int frame_index = 0;
  PointCloud cloud;
  std::optional<HandJoints> hand;

  bool hand_valid() const { return hand.has_value() && hand->valid; }
};

}  // namespace cuetrack

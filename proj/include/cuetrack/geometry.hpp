#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "cuetrack/errors.hpp"

namespace cuetrack {

// 3x3 proper rotation. Validity is checked where contracts require it, see
// is_rotation_matrix().
using RotationMatrix = Eigen::Matrix3d;

// Axis-angle logarithm of a rotation, radians. Norm is the rotation angle.
using RotationVector = Eigen::Vector3d;

/// Unit quaternion in (w, x, y, z) order, canonicalized so that w >= 0
/// (ties broken on the first nonzero vector component). q and -q encode the
/// same rotation; canonicalization makes file formats and comparisons
/// unambiguous.
class UnitQuaternion {
 public:
  UnitQuaternion() : w_(1.0), x_(0.0), y_(0.0), z_(0.0) {}

  // Normalizes and canonicalizes. Throws std::invalid_argument on a
  // (near-)zero quaternion.
  UnitQuaternion(double w, double x, double y, double z);

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

  Eigen::Vector4d coeffs_wxyz() const { return {w_, x_, y_, z_}; }

  RotationMatrix to_matrix() const;
  RotationVector to_rotation_vector() const;

  UnitQuaternion inverse() const { return UnitQuaternion(w_, -x_, -y_, -z_); }
  UnitQuaternion operator*(const UnitQuaternion& rhs) const;
  Eigen::Vector3d rotate(const Eigen::Vector3d& v) const;

  double dot(const UnitQuaternion& rhs) const {
    return w_ * rhs.w_ + x_ * rhs.x_ + y_ * rhs.y_ + z_ * rhs.z_;
  }

  // Equality as a rotation (double cover folded away).
  bool same_rotation(const UnitQuaternion& rhs, double tol = 1e-9) const;

 private:
  double w_, x_, y_, z_;
};

/// Rigid transform: x -> R x + t. Translation in scene units.
struct Pose {
  UnitQuaternion rotation;
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Pose() = default;
  Pose(const UnitQuaternion& q, const Eigen::Vector3d& t) : rotation(q), translation(t) {}

  Pose operator*(const Pose& rhs) const {
    return {rotation * rhs.rotation, rotation.rotate(rhs.translation) + translation};
  }

  Pose inverse() const {
    UnitQuaternion qi = rotation.inverse();
    return {qi, -qi.rotate(translation)};
  }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation.rotate(p) + translation;
  }

  static Pose identity() { return {}; }
};

// True when R^T R = I and det(R) = +1 within tol (Frobenius / absolute).
bool is_rotation_matrix(const RotationMatrix& r, double tol = 1e-8);

// Matrix -> quaternion. Throws NonOrthonormalInput when the input violates
// the rotation-matrix invariants beyond 1e-6.
UnitQuaternion quat_from_matrix(const RotationMatrix& r);

// Geodesic (rotation) angle between two rotations, in [0, pi]. Computed via
// atan2 on the relative quaternion, stable for both tiny and near-pi angles.
double geodesic_angle(const UnitQuaternion& a, const UnitQuaternion& b);
double geodesic_angle(const RotationMatrix& a, const RotationMatrix& b);

// Rotation angle of a single rotation (distance from identity).
double rotation_angle(const RotationMatrix& r);

/// Spherical linear interpolation. Hemisphere alignment (flip the sign of
/// q_b when <q_a, q_b> < 0) is applied internally, so antipodal inputs
/// interpolate along the short arc. s=0 gives q_a; s=1 gives q_b as a
/// rotation. Falls back to normalized linear interpolation when the
/// quaternion angle is below 1e-7 rad.
UnitQuaternion slerp(const UnitQuaternion& q_a, const UnitQuaternion& q_b, double s);

// Logarithm map SO(3) -> R^3. The generic path uses the skew-symmetric part;
// for angles beyond pi - 1e-3 that formula degrades (sin(theta) -> 0), so the
// axis is recovered from the eigenvector of the symmetric part
// (R + R^T)/2 = cos(t) I + (1 - cos(t)) uu^T with eigenvalue 1, with the sign
// taken from the skew part when it is nonzero (at exactly pi the sign is a
// free choice; the first nonzero component is made positive).
RotationVector rotation_log(const RotationMatrix& r);

// Exponential map R^3 -> SO(3) (Rodrigues, with a Taylor branch near zero).
RotationMatrix rotation_exp(const RotationVector& v);

}  // namespace cuetrack

#include "cuetrack/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cuetrack {

namespace {

constexpr double kNormEps = 1e-12;

// w >= 0; when w == 0 the first nonzero of (x, y, z) is made positive.
void canonicalize(double& w, double& x, double& y, double& z) {
  bool flip = false;
  if (w < 0.0) {
    flip = true;
  } else if (w == 0.0) {
    if (x != 0.0) {
      flip = x < 0.0;
    } else if (y != 0.0) {
      flip = y < 0.0;
    } else {
      flip = z < 0.0;
    }
  }
  if (flip) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
}

}  // namespace

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > kNormEps)) {
    throw std::invalid_argument("UnitQuaternion: zero-norm coefficients");
  }
  w_ = w / n;
  x_ = x / n;
  y_ = y / n;
  z_ = z / n;
  canonicalize(w_, x_, y_, z_);
}

RotationMatrix UnitQuaternion::to_matrix() const {
  return Eigen::Quaterniond(w_, x_, y_, z_).toRotationMatrix();
}

RotationVector UnitQuaternion::to_rotation_vector() const {
  // angle = 2 atan2(|v|, w); axis = v/|v|. Stable for all magnitudes.
  const Eigen::Vector3d v(x_, y_, z_);
  const double vn = v.norm();
  if (vn < 1e-12) {
    return 2.0 * v;  // first-order: sin(t/2) ~ t/2
  }
  const double angle = 2.0 * std::atan2(vn, w_);
  return (angle / vn) * v;
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& rhs) const {
  const Eigen::Quaterniond p =
      Eigen::Quaterniond(w_, x_, y_, z_) * Eigen::Quaterniond(rhs.w_, rhs.x_, rhs.y_, rhs.z_);
  return UnitQuaternion(p.w(), p.x(), p.y(), p.z());
}

Eigen::Vector3d UnitQuaternion::rotate(const Eigen::Vector3d& v) const {
  return Eigen::Quaterniond(w_, x_, y_, z_) * v;
}

bool UnitQuaternion::same_rotation(const UnitQuaternion& rhs, double tol) const {
  return geodesic_angle(*this, rhs) <= tol;
}

bool is_rotation_matrix(const RotationMatrix& r, double tol) {
  const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
  return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

UnitQuaternion quat_from_matrix(const RotationMatrix& r) {
  if (!is_rotation_matrix(r, 1e-6)) {
    throw NonOrthonormalInput("quat_from_matrix: input is not a proper rotation within 1e-6");
  }
  const Eigen::Quaterniond q(r);
  return UnitQuaternion(q.w(), q.x(), q.y(), q.z());
}

double geodesic_angle(const UnitQuaternion& a, const UnitQuaternion& b) {
  const UnitQuaternion d = a.inverse() * b;
  const double vn = std::sqrt(d.x() * d.x() + d.y() * d.y() + d.z() * d.z());
  return 2.0 * std::atan2(vn, std::abs(d.w()));
}

double geodesic_angle(const RotationMatrix& a, const RotationMatrix& b) {
  return geodesic_angle(quat_from_matrix(a), quat_from_matrix(b));
}

double rotation_angle(const RotationMatrix& r) {
  const UnitQuaternion q = quat_from_matrix(r);
  const double vn = std::sqrt(q.x() * q.x() + q.y() * q.y() + q.z() * q.z());
  return 2.0 * std::atan2(vn, std::abs(q.w()));
}

UnitQuaternion slerp(const UnitQuaternion& q_a, const UnitQuaternion& q_b, double s) {
  Eigen::Vector4d a = q_a.coeffs_wxyz();
  Eigen::Vector4d b = q_b.coeffs_wxyz();
  double d = a.dot(b);
  if (d < 0.0) {
    b = -b;
    d = -d;
  }
  d = std::min(d, 1.0);
  const double theta = std::acos(d);
  Eigen::Vector4d out;
  if (theta < 1e-7) {
    out = (1.0 - s) * a + s * b;  // degenerate sin(theta) denominator
  } else {
    const double st = std::sin(theta);
    out = (std::sin((1.0 - s) * theta) / st) * a + (std::sin(s * theta) / st) * b;
  }
  return UnitQuaternion(out[0], out[1], out[2], out[3]);
}

RotationVector rotation_log(const RotationMatrix& r) {
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(c);
  const Eigen::Vector3d skew(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));

  if (theta < 1e-6) {
    // theta/sin(theta) ~ 1 + theta^2/6
    return 0.5 * (1.0 + theta * theta / 6.0) * skew;
  }
  if (theta > M_PI - 1e-3) {
    // Symmetric-part eigen branch: (R + R^T)/2 has the axis as the
    // eigenvector with eigenvalue 1 (the largest).
    const Eigen::Matrix3d sym = 0.5 * (r + r.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sym);
    Eigen::Vector3d axis = es.eigenvectors().col(2).normalized();
    const double sn = skew.norm();
    if (sn > 1e-12) {
      if (axis.dot(skew) < 0.0) axis = -axis;
    } else {
      // Exactly pi: u and -u give the same rotation; pick a deterministic sign.
      if (axis.x() != 0.0 ? axis.x() < 0.0 : (axis.y() != 0.0 ? axis.y() < 0.0 : axis.z() < 0.0)) {
        axis = -axis;
      }
    }
    return theta * axis;
  }
  return (theta / (2.0 * std::sin(theta))) * skew;
}

RotationMatrix rotation_exp(const RotationVector& v) {
  const double theta = v.norm();
  Eigen::Matrix3d k;
  k << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  double a, b;
  if (theta < 1e-6) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Eigen::Matrix3d::Identity() + a * k + b * (k * k);
}

}  // namespace cuetrack

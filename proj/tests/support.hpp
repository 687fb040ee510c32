#pragma once

#include <random>

#include <Eigen/Core>

#include "cuetrack/geometry.hpp"
#include "cuetrack/observation.hpp"
#include "cuetrack/trajectory.hpp"

namespace cuetrack::testsupport {

inline Eigen::Vector3d random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  while (v.norm() < 1e-6) {
    v = {g(rng), g(rng), g(rng)};
  }
  return v.normalized();
}

// Uniformly distributed random rotation (Shoemake's quaternion method).
inline UnitQuaternion random_quaternion(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double u1 = u(rng), u2 = u(rng), u3 = u(rng);
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  return UnitQuaternion(a * std::sin(2.0 * M_PI * u2), a * std::cos(2.0 * M_PI * u2),
                        b * std::sin(2.0 * M_PI * u3), b * std::cos(2.0 * M_PI * u3));
}

inline RotationMatrix random_rotation(std::mt19937_64& rng) {
  return random_quaternion(rng).to_matrix();
}

inline Eigen::Vector3d random_vector(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

// Independent Rodrigues evaluation used as the exponential-map oracle.
inline RotationMatrix rodrigues_oracle(const Eigen::Vector3d& v) {
  const double theta = v.norm();
  if (theta == 0.0) return RotationMatrix::Identity();
  const Eigen::Vector3d u = v / theta;
  Eigen::Matrix3d k;
  k << 0, -u.z(), u.y(), u.z(), 0, -u.x(), -u.y(), u.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(theta) * k +
         (1.0 - std::cos(theta)) * (k * k);
}

inline PointMatrix random_cloud(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  PointMatrix pts(n, 3);
  for (int k = 0; k < n; ++k) {
    pts.row(k) = Eigen::RowVector3d(u(rng), u(rng), u(rng));
  }
  return pts;
}

inline Trajectory random_trajectory(std::mt19937_64& rng, int n, double trans_scale = 1.0) {
  Trajectory t;
  for (int f = 0; f < n; ++f) {
    TrajectoryEntry e;
    e.frame = f;
    e.pose.rotation = random_quaternion(rng);
    e.pose.translation = random_vector(rng, trans_scale);
    t.push_back(e);
  }
  return t;
}

}  // namespace cuetrack::testsupport

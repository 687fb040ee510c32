#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cuetrack/geometry.hpp"
#include "support.hpp"

using namespace cuetrack;
using namespace cuetrack::testsupport;

TEST_CASE("quaternion canonicalization keeps w nonnegative") {
  const UnitQuaternion q(-0.5, 0.5, 0.5, 0.5);
  CHECK(q.w() == doctest::Approx(0.5));
  CHECK(q.x() == doctest::Approx(-0.5));
  // w == 0: sign fixed by the first nonzero vector component.
  const UnitQuaternion r(0.0, -1.0, 0.0, 0.0);
  CHECK(r.x() == doctest::Approx(1.0));
}

TEST_CASE("quat_from_matrix on identity and 180-degree rotations") {
  const UnitQuaternion qi = quat_from_matrix(RotationMatrix::Identity());
  CHECK(qi.w() == doctest::Approx(1.0));
  CHECK(qi.coeffs_wxyz().tail<3>().norm() == doctest::Approx(0.0));

  RotationMatrix rz180;
  rz180 << -1, 0, 0, 0, -1, 0, 0, 0, 1;
  const UnitQuaternion qz = quat_from_matrix(rz180);
  CHECK(std::abs(qz.z()) == doctest::Approx(1.0));
  CHECK(std::abs(qz.w()) == doctest::Approx(0.0));
}

TEST_CASE("quat_from_matrix round-trips a rotation built by the Rodrigues oracle") {
  const Eigen::Vector3d v(0.3, -0.2, 0.5);
  const RotationMatrix r = rodrigues_oracle(v);
  const UnitQuaternion q = quat_from_matrix(r);
  CHECK((q.to_matrix() - r).norm() < 1e-10);
}

TEST_CASE("quat_from_matrix rejects non-orthonormal input") {
  RotationMatrix bad = RotationMatrix::Identity();
  bad(0, 0) = 1.5;
  CHECK_THROWS_AS(quat_from_matrix(bad), NonOrthonormalInput);
  RotationMatrix reflect = RotationMatrix::Identity();
  reflect(2, 2) = -1.0;  // det = -1
  CHECK_THROWS_AS(quat_from_matrix(reflect), NonOrthonormalInput);
}

TEST_CASE("quat<->matrix round trip over random rotations") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10000; ++k) {
    const UnitQuaternion q = random_quaternion(rng);
    const RotationMatrix r = q.to_matrix();
    const UnitQuaternion q2 = quat_from_matrix(r);
    CHECK((q2.to_matrix() - r).norm() < 1e-10);
  }
}

TEST_CASE("slerp endpoint and midpoint cases") {
  std::mt19937_64 rng(11);
  const UnitQuaternion q = random_quaternion(rng);
  CHECK(slerp(q, q, 0.5).same_rotation(q, 1e-12));

  // identity -> 90 deg about z at s=0.5 is 45 deg about z.
  const UnitQuaternion qa;
  const UnitQuaternion qb(std::cos(M_PI / 4), 0, 0, std::sin(M_PI / 4));
  const UnitQuaternion mid = slerp(qa, qb, 0.5);
  const UnitQuaternion expect(std::cos(M_PI / 8), 0, 0, std::sin(M_PI / 8));
  CHECK(geodesic_angle(mid, expect) < 1e-12);

  // Double cover: q and -q are the same rotation.
  const UnitQuaternion neg(-q.w(), -q.x(), -q.y(), -q.z());
  for (const double s : {0.0, 0.25, 0.7, 1.0}) {
    CHECK(slerp(q, neg, s).same_rotation(q, 1e-12));
  }
}

TEST_CASE("slerp endpoints are exact") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const UnitQuaternion a = random_quaternion(rng);
    const UnitQuaternion b = random_quaternion(rng);
    CHECK(geodesic_angle(slerp(a, b, 0.0), a) < 1e-12);
    CHECK(geodesic_angle(slerp(a, b, 1.0), b) < 1e-12);
  }
}

TEST_CASE("slerp stays unit norm and splits the geodesic angle proportionally") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> us(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const UnitQuaternion a = random_quaternion(rng);
    const UnitQuaternion b = random_quaternion(rng);
    const double s = us(rng);
    const UnitQuaternion m = slerp(a, b, s);
    CHECK(std::abs(m.coeffs_wxyz().norm() - 1.0) < 1e-9);
    const double total = geodesic_angle(a, b);
    CHECK(std::abs(geodesic_angle(a, m) - s * total) < 1e-9);
    // Geodesic additivity.
    CHECK(std::abs(geodesic_angle(a, m) + geodesic_angle(m, b) - total) < 1e-8);
  }
}

TEST_CASE("rotation_log identity and single-axis values") {
  CHECK(rotation_log(RotationMatrix::Identity()).norm() == doctest::Approx(0.0));
  const RotationMatrix rz = rodrigues_oracle({0, 0, 0.5});
  const RotationVector v = rotation_log(rz);
  CHECK(v.x() == doctest::Approx(0.0));
  CHECK(v.y() == doctest::Approx(0.0));
  CHECK(v.z() == doctest::Approx(0.5));
}

TEST_CASE("rotation log/exp round trips, including large angles") {
  std::mt19937_64 rng(19);
  const Eigen::Vector3d big = 2.9 * random_unit_vector(rng);
  CHECK((rotation_log(rotation_exp(big)) - big).norm() < 1e-7);

  for (int k = 0; k < 5000; ++k) {
    std::uniform_real_distribution<double> ua(0.0, M_PI - 1e-6);
    const Eigen::Vector3d v = ua(rng) * random_unit_vector(rng);
    const RotationMatrix r = rotation_exp(v);
    CHECK((r - rodrigues_oracle(v)).norm() < 1e-12);
    CHECK((rotation_exp(rotation_log(r)) - r).norm() < 1e-8);
  }
}

TEST_CASE("rotation_log near and at pi uses the stable eigen branch") {
  std::mt19937_64 rng(23);
  for (const double angle : {M_PI - 1e-4, M_PI - 1e-7, M_PI - 1e-9, M_PI}) {
    for (int k = 0; k < 50; ++k) {
      const Eigen::Vector3d axis = random_unit_vector(rng);
      const RotationMatrix r = rodrigues_oracle(angle * axis);
      const RotationVector v = rotation_log(r);
      CHECK(std::abs(v.norm() - angle) < 1e-6);
      CHECK((rotation_exp(v) - r).norm() < 1e-8);
    }
  }
}

TEST_CASE("geodesic angle matches the log norm") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 1000; ++k) {
    const RotationMatrix a = random_rotation(rng);
    const RotationMatrix b = random_rotation(rng);
    const double via_quat = geodesic_angle(a, b);
    const double via_log = rotation_log(a.transpose() * b).norm();
    CHECK(std::abs(via_quat - via_log) < 1e-9);
  }
}

TEST_CASE("pose composition and inverse") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 1000; ++k) {
    const Pose p(random_quaternion(rng), random_vector(rng));
    const Pose q(random_quaternion(rng), random_vector(rng));
    const Pose r(random_quaternion(rng), random_vector(rng));
    // Associativity on a probe point.
    const Eigen::Vector3d x = random_vector(rng);
    CHECK((((p * q) * r).apply(x) - (p * (q * r)).apply(x)).norm() < 1e-12);
    const Pose id = p * p.inverse();
    CHECK(geodesic_angle(id.rotation, UnitQuaternion()) < 1e-9);
    CHECK(id.translation.norm() < 1e-9);
  }
}

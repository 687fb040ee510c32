#include "cuetrack/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "cuetrack/kdtree.hpp"

namespace cuetrack {

namespace {

constexpr Eigen::Index kBruteForceThreshold = 256;
constexpr double kRankTol = 1e-12;  // singular values below kRankTol * largest count as zero

// Kabsch solve of argmin_R sum ||R a_k - b_k||^2 from the cross-covariance
// H = sum a_k b_k^T, with the reflection correction. Returns the singular
// values for rank diagnostics.
RotationMatrix kabsch_from_covariance(const Eigen::Matrix3d& h, Eigen::Vector3d* singular_values) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (singular_values != nullptr) {
    *singular_values = svd.singularValues();
  }
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  const double d = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return v * Eigen::Vector3d(1.0, 1.0, d).asDiagonal() * u.transpose();
}

bool rank_below_two(const Eigen::Vector3d& sv) {
  return sv[1] < kRankTol * std::max(sv[0], 1e-300);
}

PointMatrix centered_subsample(const PointCloud& cloud, int max_points, unsigned seed) {
  const Eigen::Index n = cloud.size();
  PointMatrix out;
  if (n <= max_points) {
    out = cloud.points();
  } else {
    std::vector<Eigen::Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    out.resize(max_points, 3);
    for (int k = 0; k < max_points; ++k) {
      out.row(k) = cloud.points().row(idx[static_cast<size_t>(k)]);
    }
  }
  // Center at the full-cloud centroid (the objective is defined on centered
  // points; the subsample must not shift the center).
  out.rowwise() -= cloud.centroid().transpose();
  return out;
}

}  // namespace

void IcpConfig::validate() const {
  if (max_iterations <= 0 || convergence_tol <= 0.0 || max_points <= 0 || min_points <= 0) {
    throw ConfigError("IcpConfig: all fields must be positive");
  }
}

std::pair<RotationMatrix, IcpReport> icp_rotation(const PointCloud& source,
                                                  const PointCloud& target,
                                                  const IcpConfig& cfg) {
  cfg.validate();
  if (source.size() < cfg.min_points) {
    throw InsufficientPoints("source", static_cast<long>(source.size()),
                             "icp_rotation: source cloud below min_points");
  }
  if (target.size() < cfg.min_points) {
    throw InsufficientPoints("target", static_cast<long>(target.size()),
                             "icp_rotation: target cloud below min_points");
  }

  const PointMatrix src = centered_subsample(source, cfg.max_points, cfg.subsample_seed);
  const PointMatrix dst = centered_subsample(target, cfg.max_points, cfg.subsample_seed + 1);
  const Eigen::Index n = src.rows();

  const bool brute = dst.rows() < kBruteForceThreshold;
  std::optional<KdTree3> tree;
  if (!brute) {
    tree.emplace(dst);
  }
  auto nearest = [&](const Eigen::Vector3d& q) -> Eigen::Index {
    if (brute) {
      Eigen::Index best = 0;
      ((dst.rowwise() - q.transpose()).rowwise().squaredNorm()).minCoeff(&best);
      return best;
    }
    return tree->nearest(q).first;
  };

  RotationMatrix r = RotationMatrix::Identity();
  IcpReport report;
  Eigen::Vector3d sv = Eigen::Vector3d::Zero();
  std::vector<Eigen::Index> assign(static_cast<size_t>(n));

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    double sq_sum = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Vector3d p = r * src.row(k).transpose();
      const Eigen::Index j = nearest(p);
      assign[static_cast<size_t>(k)] = j;
      sq_sum += (p - dst.row(j).transpose()).squaredNorm();
    }
    report.objective_history.push_back(sq_sum / static_cast<double>(n));

    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (Eigen::Index k = 0; k < n; ++k) {
      h.noalias() +=
          src.row(k).transpose() * dst.row(assign[static_cast<size_t>(k)]);
    }
    const RotationMatrix r_new = kabsch_from_covariance(h, &sv);
    const double change = geodesic_angle(r, r_new);
    r = r_new;
    report.iterations = iter + 1;
    if (change < cfg.convergence_tol) {
      report.converged = true;
      break;
    }
  }

  double dist_sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Vector3d p = r * src.row(k).transpose();
    const Eigen::Index j = nearest(p);
    dist_sum += (p - dst.row(j).transpose()).norm();
  }
  report.mean_residual = dist_sum / static_cast<double>(n);
  report.degenerate = rank_below_two(sv);
  return {r, report};
}

RotationMatrix weighted_procrustes(const HandJoints& joints_i, const HandJoints& joints_j,
                                   const JointWeights& w) {
  const Eigen::Vector3d anchor_i = joints_i.anchor();
  const Eigen::Vector3d anchor_j = joints_j.anchor();
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (int l = 0; l < HandJoints::kNumJoints; ++l) {
    const Eigen::Vector3d a = joints_i.joints.row(l).transpose() - anchor_i;
    const Eigen::Vector3d b = joints_j.joints.row(l).transpose() - anchor_j;
    h.noalias() += w[l] * (a * b.transpose());
  }
  Eigen::Vector3d sv;
  const RotationMatrix r = kabsch_from_covariance(h, &sv);
  if (rank_below_two(sv)) {
    throw DegenerateJoints("weighted_procrustes: weighted covariance rank < 2");
  }
  return r;
}

SimilarityTransform umeyama_align(const Trajectory& predicted, const Trajectory& reference) {
  std::vector<Eigen::Vector3d> src, dst;
  for (const auto& e : predicted.entries()) {
    if (const TrajectoryEntry* m = reference.find(e.frame)) {
      src.push_back(e.pose.translation);
      dst.push_back(m->pose.translation);
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(src.size());
  if (n < 3) {
    throw TooFewFrames("umeyama_align: need at least 3 common frames");
  }

  Eigen::Vector3d mu_src = Eigen::Vector3d::Zero();
  Eigen::Vector3d mu_dst = Eigen::Vector3d::Zero();
  for (Eigen::Index k = 0; k < n; ++k) {
    mu_src += src[static_cast<size_t>(k)];
    mu_dst += dst[static_cast<size_t>(k)];
  }
  mu_src /= static_cast<double>(n);
  mu_dst /= static_cast<double>(n);

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();  // dst-src cross covariance
  double var_src = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Vector3d a = src[static_cast<size_t>(k)] - mu_src;
    const Eigen::Vector3d b = dst[static_cast<size_t>(k)] - mu_dst;
    cov.noalias() += b * a.transpose();
    var_src += a.squaredNorm();
  }
  cov /= static_cast<double>(n);
  var_src /= static_cast<double>(n);

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (sv[1] < kRankTol * std::max(sv[0], 1e-300)) {
    throw DegenerateTrajectory("umeyama_align: translation covariance rank < 2");
  }
  Eigen::Vector3d s = Eigen::Vector3d::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) {
    s[2] = -1.0;
  }
  SimilarityTransform out;
  out.rotation = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  out.scale = sv.dot(s) / var_src;
  out.translation = mu_dst - out.scale * (out.rotation * mu_src);
  return out;
}

Trajectory apply_similarity(const Trajectory& traj, const SimilarityTransform& t) {
  Trajectory out = traj;
  for (auto& e : out.entries()) {
    e.pose.translation = t.apply(e.pose.translation);
  }
  return out;
}

Trajectory first_frame_rotation_align(const Trajectory& predicted, const Trajectory& reference) {
  if (predicted.empty() || reference.empty()) {
    throw EmptyTrajectory("first_frame_rotation_align: empty trajectory");
  }
  const TrajectoryEntry* ref0 = nullptr;
  const TrajectoryEntry* pred0 = nullptr;
  for (const auto& e : predicted.entries()) {
    if (const TrajectoryEntry* m = reference.find(e.frame)) {
      pred0 = &e;
      ref0 = m;
      break;
    }
  }
  if (ref0 == nullptr) {
    throw NoCommonFrames("first_frame_rotation_align: no shared frame");
  }
  const UnitQuaternion offset = ref0->pose.rotation * pred0->pose.rotation.inverse();
  Trajectory out = predicted;
  for (auto& e : out.entries()) {
    e.pose.rotation = offset * e.pose.rotation;
  }
  return out;
}

}  // namespace cuetrack

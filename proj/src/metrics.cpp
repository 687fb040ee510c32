#include "cuetrack/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace cuetrack {

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;

// Common frames as paired entries, predicted first.
std::vector<std::pair<const TrajectoryEntry*, const TrajectoryEntry*>> intersect(
    const Trajectory& predicted, const Trajectory& reference) {
  std::vector<std::pair<const TrajectoryEntry*, const TrajectoryEntry*>> out;
  for (const auto& e : predicted.entries()) {
    if (const TrajectoryEntry* m = reference.find(e.frame)) {
      out.emplace_back(&e, m);
    }
  }
  return out;
}

// Body-frame relative rotation between consecutive entries: R_i^T R_{i+1},
// kept in quaternion form. The geodesic angles below equal
// arccos((tr(.)-1)/2) on the corresponding matrices but stay accurate near
// zero (the arccos form bottoms out around 1e-8 rad).
UnitQuaternion body_delta(const Pose& a, const Pose& b) {
  return a.rotation.inverse() * b.rotation;
}

// Pearson correlation; `flagged` is set when either side has (numerically)
// zero spread, in which case the contribution is defined as 0.
double pearson(const std::vector<double>& x, const std::vector<double>& y, bool* flagged) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return std::make_pair(*hi - *lo, std::max(std::abs(*hi), std::abs(*lo)));
  };
  const auto [sx, ax] = spread(x);
  const auto [sy, ay] = spread(y);
  if (sx <= 1e-12 * ax || sy <= 1e-12 * ay) {
    *flagged = true;
    return 0.0;
  }
  *flagged = false;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::pair<double, double> relative_errors(const Trajectory& predicted,
                                          const Trajectory& reference) {
  const auto common = intersect(predicted, reference);
  if (common.size() < 2) {
    throw TooFewFrames("relative_errors: need at least 2 common frames");
  }
  double rre = 0.0, rte = 0.0;
  for (size_t k = 0; k + 1 < common.size(); ++k) {
    const UnitQuaternion dq_pred =
        body_delta(common[k].first->pose, common[k + 1].first->pose);
    const UnitQuaternion dq_ref =
        body_delta(common[k].second->pose, common[k + 1].second->pose);
    rre += geodesic_angle(dq_ref, dq_pred);
    const Eigen::Vector3d dt_pred =
        common[k + 1].first->pose.translation - common[k].first->pose.translation;
    const Eigen::Vector3d dt_ref =
        common[k + 1].second->pose.translation - common[k].second->pose.translation;
    rte += (dt_ref - dt_pred).norm();
  }
  const double n = static_cast<double>(common.size() - 1);
  return {rre / n * kRadToDeg, rte / n};
}

std::pair<double, double> absolute_errors(const Trajectory& predicted,
                                          const Trajectory& reference) {
  const auto common = intersect(predicted, reference);
  if (common.empty()) {
    throw TooFewFrames("absolute_errors: no common frames");
  }
  double are = 0.0, ate_sq = 0.0;
  for (const auto& [pred, ref] : common) {
    are += geodesic_angle(ref->pose.rotation, pred->pose.rotation);
    ate_sq += (ref->pose.translation - pred->pose.translation).squaredNorm();
  }
  const double n = static_cast<double>(common.size());
  return {are / n * kRadToDeg, std::sqrt(ate_sq / n)};
}

TccResult tcc(const Trajectory& predicted, const Trajectory& reference) {
  const auto common = intersect(predicted, reference);
  if (common.size() < 3) {
    throw TooFewFrames("tcc: need at least 3 common frames");
  }
  std::array<std::vector<double>, 3> rot_pred, rot_ref, trans_pred, trans_ref;
  for (size_t k = 0; k + 1 < common.size(); ++k) {
    const RotationVector lp =
        body_delta(common[k].first->pose, common[k + 1].first->pose).to_rotation_vector();
    const RotationVector lr =
        body_delta(common[k].second->pose, common[k + 1].second->pose).to_rotation_vector();
    const Eigen::Vector3d tp =
        common[k + 1].first->pose.translation - common[k].first->pose.translation;
    const Eigen::Vector3d tr =
        common[k + 1].second->pose.translation - common[k].second->pose.translation;
    for (size_t d = 0; d < 3; ++d) {
      rot_pred[d].push_back(lp[static_cast<Eigen::Index>(d)]);
      rot_ref[d].push_back(lr[static_cast<Eigen::Index>(d)]);
      trans_pred[d].push_back(tp[static_cast<Eigen::Index>(d)]);
      trans_ref[d].push_back(tr[static_cast<Eigen::Index>(d)]);
    }
  }
  TccResult out;
  for (size_t d = 0; d < 3; ++d) {
    bool flagged = false;
    out.axes.rot[static_cast<Eigen::Index>(d)] = pearson(rot_pred[d], rot_ref[d], &flagged);
    out.axes.rot_flagged[d] = flagged;
    out.axes.trans[static_cast<Eigen::Index>(d)] = pearson(trans_pred[d], trans_ref[d], &flagged);
    out.axes.trans_flagged[d] = flagged;
  }
  out.tcc_r = out.axes.rot.sum() / 3.0;
  out.tcc_t = out.axes.trans.sum() / 3.0;
  return out;
}

MetricsReport evaluate(const Trajectory& predicted, const Trajectory& reference,
                       const EvalOptions& options) {
  // Intersect once so alignment and metrics see the same frames.
  Trajectory pred, ref;
  for (const auto& e : predicted.entries()) {
    if (const TrajectoryEntry* m = reference.find(e.frame)) {
      pred.push_back(e);
      ref.push_back(*m);
    }
  }
  if (pred.empty()) {
    throw NoCommonFrames("evaluate: trajectories share no frame");
  }

  MetricsReport report;
  report.frames = static_cast<int>(pred.size());

  if (options.first_frame_align) {
    report.first_frame_offset = ref[0].pose.rotation * pred[0].pose.rotation.inverse();
    pred = first_frame_rotation_align(pred, ref);
    report.first_frame_aligned = true;
  }
  if (options.umeyama) {
    try {
      report.umeyama = umeyama_align(pred, ref);
      pred = apply_similarity(pred, report.umeyama);
      report.umeyama_applied = true;
    } catch (const DegenerateTrajectory&) {
      report.umeyama_skipped_degenerate = true;
    } catch (const TooFewFrames&) {
      report.umeyama_skipped_degenerate = true;
    }
  }

  if (pred.size() >= 2) {
    std::tie(report.rre_deg, report.rte) = relative_errors(pred, ref);
  }
  std::tie(report.are_deg, report.ate) = absolute_errors(pred, ref);
  if (pred.size() >= 3) {
    const TccResult t = tcc(pred, ref);
    report.tcc_r = t.tcc_r;
    report.tcc_t = t.tcc_t;
    report.tcc_axes = t.axes;
  }

  if (options.per_frame) {
    report.per_frame.reserve(pred.size());
    for (size_t k = 0; k < pred.size(); ++k) {
      PerFrameError pf;
      pf.frame = pred[k].frame;
      pf.trans_err = (ref[k].pose.translation - pred[k].pose.translation).norm();
      pf.rot_err_deg = geodesic_angle(ref[k].pose.rotation, pred[k].pose.rotation) * kRadToDeg;
      report.per_frame.push_back(pf);
    }
  }
  return report;
}

}  // namespace cuetrack

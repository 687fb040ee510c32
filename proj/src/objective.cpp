#include "cuetrack/objective.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cuetrack {

namespace {

const TrajectoryEntry& entry_or_throw(const Trajectory& traj, int frame, const char* who) {
  const TrajectoryEntry* e = traj.find(frame);
  if (e == nullptr) {
    throw MissingFrame(std::string(who) + ": frame " + std::to_string(frame) +
                       " not in trajectory");
  }
  return *e;
}

Eigen::Vector2d project(const Eigen::Vector3d& t, const Intrinsics& intr) {
  if (t.z() <= 1e-6) {
    throw BehindCamera("loss_trans: translation z <= 1e-6, cannot project");
  }
  return {intr.fx * t.x() / t.z() + intr.cx, intr.fy * t.y() / t.z() + intr.cy};
}

}  // namespace

WindowSample::WindowSample(int a_, int b_, int c_) : a(a_), b(b_), c(c_) {
  if (!(a < b && b < c)) {
    throw std::invalid_argument("WindowSample: indices must satisfy a < b < c");
  }
}

void LossWeights::validate() const {
  if (lambda_trans < 0.0 || lambda_cons < 0.0 || lambda_smooth < 0.0 || lambda_bound < 0.0) {
    throw ConfigError("LossWeights: weights must be nonnegative");
  }
}

void Intrinsics::validate() const {
  if (fx <= 0.0 || fy <= 0.0) {
    throw ConfigError("Intrinsics: fx and fy must be positive");
  }
}

RotationMatrix relative_rotation_world(const Pose& pose_u, const Pose& pose_v) {
  return (pose_v.rotation * pose_u.rotation.inverse()).to_matrix();
}

double loss_rot(const WindowSample& window, const Trajectory& predicted,
                const Trajectory& reference) {
  double sum = 0.0;
  for (const auto& [u, v] : window.pairs()) {
    const RotationMatrix pred = relative_rotation_world(
        entry_or_throw(predicted, u, "loss_rot").pose, entry_or_throw(predicted, v, "loss_rot").pose);
    const RotationMatrix ref = relative_rotation_world(
        entry_or_throw(reference, u, "loss_rot").pose, entry_or_throw(reference, v, "loss_rot").pose);
    sum += rotation_log(ref.transpose() * pred).norm();
  }
  return sum / 3.0;
}

TransLoss loss_trans(const WindowSample& window, const Trajectory& predicted,
                     const Trajectory& reference, const std::optional<Intrinsics>& intr) {
  if (intr.has_value()) {
    intr->validate();
  }
  double sum = 0.0;
  for (const int f : {window.a, window.b, window.c}) {
    const Eigen::Vector3d tp = entry_or_throw(predicted, f, "loss_trans").pose.translation;
    const Eigen::Vector3d tr = entry_or_throw(reference, f, "loss_trans").pose.translation;
    if (intr.has_value()) {
      sum += (project(tp, *intr) - project(tr, *intr)).cwiseAbs().sum();
    } else {
      sum += (tp - tr).cwiseAbs().sum();
    }
  }
  return {sum / 3.0,
          intr.has_value() ? TranslationSpace::kImagePixels : TranslationSpace::kScene3d};
}

double loss_cons(const RotationMatrix& r_ab, const RotationMatrix& r_bc,
                 const RotationMatrix& r_ac) {
  return rotation_log((r_bc * r_ab).transpose() * r_ac).norm();
}

double loss_smooth(const Eigen::Vector3d& t_a, const Eigen::Vector3d& t_b,
                   const Eigen::Vector3d& t_c, int a, int b, int c) {
  if (!(a < b && b < c)) {
    throw std::invalid_argument("loss_smooth: indices must satisfy a < b < c");
  }
  const Eigen::Vector3d v_bc = (t_c - t_b) / static_cast<double>(c - b);
  const Eigen::Vector3d v_ab = (t_b - t_a) / static_cast<double>(b - a);
  return (v_bc - v_ab).norm();
}

double loss_bound(const Eigen::Vector3d& delta, double sigma) {
  if (sigma < 0.0) {
    throw std::invalid_argument("loss_bound: sigma must be >= 0");
  }
  const double excess = std::max(0.0, delta.norm() - 0.5 * sigma);
  return excess * excess;
}

double weighted_total(double rot, double trans, double cons, double smooth, double bound,
                      const LossWeights& w) {
  return rot + w.lambda_trans * trans + w.lambda_cons * cons + w.lambda_smooth * smooth +
         w.lambda_bound * bound;
}

ObjectiveBreakdown total_objective(const WindowSample& window, const Trajectory& predicted,
                                   const Trajectory& reference, const LossWeights& weights,
                                   const std::optional<Intrinsics>& intr,
                                   const std::vector<std::pair<Eigen::Vector3d, double>>& delta_sigma) {
  weights.validate();
  ObjectiveBreakdown out;
  out.rot = loss_rot(window, predicted, reference);
  const TransLoss tl = loss_trans(window, predicted, reference, intr);
  out.trans = tl.value;
  out.trans_space = tl.space;

  const Pose& pa = entry_or_throw(predicted, window.a, "total_objective").pose;
  const Pose& pb = entry_or_throw(predicted, window.b, "total_objective").pose;
  const Pose& pc = entry_or_throw(predicted, window.c, "total_objective").pose;
  out.cons = loss_cons(relative_rotation_world(pa, pb), relative_rotation_world(pb, pc),
                       relative_rotation_world(pa, pc));
  out.smooth = loss_smooth(pa.translation, pb.translation, pc.translation, window.a, window.b,
                           window.c);
  if (!delta_sigma.empty()) {
    double sum = 0.0;
    for (const auto& [delta, sigma] : delta_sigma) {
      sum += loss_bound(delta, sigma);
    }
    out.bound = sum / static_cast<double>(delta_sigma.size());
    out.bound_available = true;
  }
  out.total = weighted_total(out.rot, out.trans, out.cons, out.smooth, out.bound, weights);
  return out;
}

ObjectiveReport score_windows(const Trajectory& predicted, const Trajectory& reference,
                              const std::vector<WindowSample>& windows,
                              const LossWeights& weights, const std::optional<Intrinsics>& intr) {
  ObjectiveReport report;
  report.weights = weights;
  for (const auto& w : windows) {
    report.windows.push_back({w, total_objective(w, predicted, reference, weights, intr)});
  }
  if (!report.windows.empty()) {
    auto& agg = report.aggregate;
    for (const auto& ws : report.windows) {
      agg.rot += ws.breakdown.rot;
      agg.trans += ws.breakdown.trans;
      agg.cons += ws.breakdown.cons;
      agg.smooth += ws.breakdown.smooth;
      agg.bound += ws.breakdown.bound;
    }
    const double n = static_cast<double>(report.windows.size());
    agg.rot /= n;
    agg.trans /= n;
    agg.cons /= n;
    agg.smooth /= n;
    agg.bound /= n;
    agg.trans_space = report.windows.front().breakdown.trans_space;
    agg.bound_available = report.windows.front().breakdown.bound_available;
    agg.total = weighted_total(agg.rot, agg.trans, agg.cons, agg.smooth, agg.bound, weights);
  }
  return report;
}

std::vector<WindowSample> make_windows(const std::vector<int>& frames, const std::string& spec) {
  const int n = static_cast<int>(frames.size());
  std::vector<WindowSample> out;
  if (spec == "all") {
    for (int k = 0; k + 2 < n; ++k) {
      out.emplace_back(frames[static_cast<size_t>(k)], frames[static_cast<size_t>(k + 1)],
                       frames[static_cast<size_t>(k + 2)]);
    }
    return out;
  }
  if (spec.rfind("stride:", 0) == 0) {
    int stride = 0;
    try {
      stride = std::stoi(spec.substr(7));
    } catch (const std::exception&) {
      throw ConfigError("make_windows: bad stride in spec '" + spec + "'");
    }
    if (stride < 1) {
      throw ConfigError("make_windows: stride must be >= 1");
    }
    for (int k = 0; k + 2 * stride < n; ++k) {
      out.emplace_back(frames[static_cast<size_t>(k)], frames[static_cast<size_t>(k + stride)],
                       frames[static_cast<size_t>(k + 2 * stride)]);
    }
    return out;
  }
  if (spec.rfind("random:", 0) == 0) {
    const std::string rest = spec.substr(7);
    const size_t colon = rest.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("make_windows: expected random:COUNT:SEED");
    }
    int count = 0;
    unsigned seed = 0;
    try {
      count = std::stoi(rest.substr(0, colon));
      seed = static_cast<unsigned>(std::stoul(rest.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("make_windows: bad count/seed in spec '" + spec + "'");
    }
    if (count < 0 || n < 3) {
      throw ConfigError("make_windows: need >= 3 frames and count >= 0");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(0, n - 1);
    while (static_cast<int>(out.size()) < count) {
      int i = dist(rng), j = dist(rng), k = dist(rng);
      if (i == j || j == k || i == k) continue;
      int lo = std::min({i, j, k});
      int hi = std::max({i, j, k});
      int mid = i + j + k - lo - hi;
      out.emplace_back(frames[static_cast<size_t>(lo)], frames[static_cast<size_t>(mid)],
                       frames[static_cast<size_t>(hi)]);
    }
    return out;
  }
  throw ConfigError("make_windows: unknown window spec '" + spec + "'");
}

}  // namespace cuetrack

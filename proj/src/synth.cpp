#include "cuetrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "cuetrack/frame_io.hpp"
#include "cuetrack/trajectory_io.hpp"

namespace cuetrack {

namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;

// Uniform sample on the surface of the unit box [-0.5, 0.5]^3, rejecting the
// notch octant (all coordinates > 0.2) so the shape has no rotational
// symmetry left.
PointMatrix sample_shape(int n, bool symmetric, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> face(0, 5);
  PointMatrix pts(n, 3);
  int k = 0;
  while (k < n) {
    const int f = face(rng);
    Eigen::Vector3d p(u01(rng) - 0.5, u01(rng) - 0.5, u01(rng) - 0.5);
    p[f / 2] = (f % 2 == 0) ? -0.5 : 0.5;
    if (!symmetric && p.x() > 0.2 && p.y() > 0.2 && p.z() > 0.2) {
      continue;  // notch: this corner is cut away
    }
    pts.row(k++) = p.transpose();
  }
  // Exact zero centroid so the ground-truth translation equals the
  // full-cloud centroid path.
  const Eigen::RowVector3d mean = pts.colwise().mean();
  pts.rowwise() -= mean;
  return pts;
}

// Canonical 21-joint grasp layout in the object's body frame: wrist behind
// the +x face, thumb wrapping the +y edge, four fingers draped over the top.
Eigen::Matrix<double, HandJoints::kNumJoints, 3> grasp_layout() {
  Eigen::Matrix<double, HandJoints::kNumJoints, 3> j;
  j.row(0) = Eigen::RowVector3d(0.85, 0.0, -0.10);  // wrist
  // Thumb (1-4) curls toward the +y face.
  const Eigen::Vector3d thumb_base(0.62, 0.28, -0.05);
  const Eigen::Vector3d thumb_dir = Eigen::Vector3d(-0.35, 0.35, 0.15).normalized();
  for (int s = 0; s < 4; ++s) {
    j.row(1 + s) = (thumb_base + 0.09 * static_cast<double>(s) * thumb_dir).transpose();
  }
  // Index to pinky (5-8, 9-12, 13-16, 17-20) bend over the +z face.
  for (int finger = 0; finger < 4; ++finger) {
    const double y = 0.18 - 0.12 * static_cast<double>(finger);
    const Eigen::Vector3d base(0.60, y, 0.22);
    const Eigen::Vector3d dir = Eigen::Vector3d(-0.45, 0.0, 0.12).normalized();
    for (int s = 0; s < 4; ++s) {
      j.row(5 + 4 * finger + s) = (base + 0.085 * static_cast<double>(s) * dir).transpose();
    }
  }
  return j;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_frames < 2) throw ConfigError("synth: n_frames must be >= 2");
  if (n_points < 1) throw ConfigError("synth: n_points must be >= 1");
  if (point_noise_sigma < 0.0 || joint_noise_sigma < 0.0) {
    throw ConfigError("synth: noise sigmas must be >= 0");
  }
  if (visible_before_grasp < 0.0 || visible_before_grasp > 1.0 || visible_after_grasp < 0.0 ||
      visible_after_grasp > 1.0) {
    throw ConfigError("synth: visible fractions must lie in [0,1]");
  }
  if (!occlusion_schedule.empty()) {
    if (static_cast<int>(occlusion_schedule.size()) != n_frames) {
      throw ConfigError("synth: occlusion_schedule must have n_frames entries");
    }
    for (const double v : occlusion_schedule) {
      if (v < 0.0 || v > 1.0) throw ConfigError("synth: occlusion_schedule entry outside [0,1]");
    }
  }
  if (motion.rot_rate_sin_period <= 0.0 || motion.trans_sin_period <= 0.0) {
    throw ConfigError("synth: sinusoid periods must be positive");
  }
}

SynthSequence generate(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const PointMatrix base = sample_shape(cfg.n_points, cfg.symmetric_shape, rng);
  const Eigen::Vector3d axis = cfg.motion.rot_axis.normalized();

  std::vector<double> schedule = cfg.occlusion_schedule;
  if (schedule.empty()) {
    schedule.resize(static_cast<size_t>(cfg.n_frames));
    for (int f = 0; f < cfg.n_frames; ++f) {
      schedule[static_cast<size_t>(f)] =
          f < cfg.grasp_frame ? cfg.visible_before_grasp : cfg.visible_after_grasp;
    }
  }

  // Ground-truth motion. Frame 0 is the identity; each step rotates by the
  // (possibly modulated) rate about the fixed axis.
  std::vector<RotationMatrix> rot(static_cast<size_t>(cfg.n_frames));
  std::vector<Eigen::Vector3d> trans(static_cast<size_t>(cfg.n_frames));
  rot[0] = RotationMatrix::Identity();
  const Eigen::Vector3d phases(0.0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0);
  auto translation_at = [&](int f) {
    Eigen::Vector3d t = cfg.motion.trans_vel * static_cast<double>(f);
    for (int d = 0; d < 3; ++d) {
      const double ph = 2.0 * M_PI * static_cast<double>(f) / cfg.motion.trans_sin_period +
                        phases[d];
      t[d] += cfg.motion.trans_sin_amp[d] * (std::sin(ph) - std::sin(phases[d]));
    }
    return t;
  };
  trans[0] = translation_at(0);  // zero by construction
  for (int f = 1; f < cfg.n_frames; ++f) {
    const double rate =
        cfg.motion.rot_rate_deg *
        (1.0 + cfg.motion.rot_rate_sin_amp *
                   std::sin(2.0 * M_PI * static_cast<double>(f - 1) /
                            cfg.motion.rot_rate_sin_period));
    rot[static_cast<size_t>(f)] =
        rotation_exp(axis * (rate * kDegToRad)) * rot[static_cast<size_t>(f - 1)];
    trans[static_cast<size_t>(f)] = translation_at(f);
  }

  const auto layout = grasp_layout();
  const Eigen::Vector3d hand_start_offset(1.6, 0.9, 0.8);
  const Eigen::Vector3d occlusion_normal = Eigen::Vector3d(1.0, 0.7, 0.4).normalized();

  SynthSequence seq;
  seq.observations.reserve(static_cast<size_t>(cfg.n_frames));
  for (int f = 0; f < cfg.n_frames; ++f) {
    const RotationMatrix& r = rot[static_cast<size_t>(f)];
    const Eigen::Vector3d& t = trans[static_cast<size_t>(f)];

    // Visible subset: cut by a body-fixed plane whose normal wobbles a
    // little, so adjacent frames see overlapping but not identical subsets
    // and the visible centroid is biased toward the far side (the delta
    // residual pathway).
    const double fraction = schedule[static_cast<size_t>(f)];
    const Eigen::Index keep = static_cast<Eigen::Index>(
        std::llround(fraction * static_cast<double>(cfg.n_points)));
    std::vector<Eigen::Index> order(static_cast<size_t>(cfg.n_points));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    if (keep < cfg.n_points) {
      const Eigen::Vector3d n =
          (occlusion_normal +
           0.15 * Eigen::Vector3d(std::sin(0.10 * f), std::cos(0.13 * f), 0.0))
              .normalized();
      std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double pa = base.row(a).dot(n);
        const double pb = base.row(b).dot(n);
        if (pa != pb) return pa < pb;
        return a < b;
      });
    }
    PointMatrix visible(std::max<Eigen::Index>(keep, 0), 3);
    for (Eigen::Index k = 0; k < visible.rows(); ++k) {
      Eigen::Vector3d p = r * base.row(order[static_cast<size_t>(k)]).transpose() + t;
      if (cfg.point_noise_sigma > 0.0) {
        p += cfg.point_noise_sigma * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
      }
      visible.row(k) = p.transpose();
    }

    // Hand joints: free articulation while approaching, rigid with the
    // object from grasp_frame on.
    Eigen::Matrix<double, HandJoints::kNumJoints, 3> joints;
    const bool grasped = f >= cfg.grasp_frame;
    const double approach =
        cfg.grasp_frame > 0
            ? std::clamp(static_cast<double>(f) / static_cast<double>(cfg.grasp_frame), 0.0, 1.0)
            : 1.0;
    const RotationMatrix& rg = rot[static_cast<size_t>(std::min(cfg.grasp_frame,
                                                                cfg.n_frames - 1))];
    const Eigen::Vector3d& tg = trans[static_cast<size_t>(std::min(cfg.grasp_frame,
                                                                   cfg.n_frames - 1))];
    for (int l = 0; l < HandJoints::kNumJoints; ++l) {
      Eigen::Vector3d p;
      if (grasped) {
        p = r * layout.row(l).transpose() + t;
      } else {
        const Eigen::Vector3d target = rg * layout.row(l).transpose() + tg;
        const Eigen::Vector3d start = layout.row(l).transpose() + hand_start_offset;
        p = (1.0 - approach) * start + approach * target;
        const double wiggle = 0.03 * (1.0 - approach);
        p += wiggle * Eigen::Vector3d(std::sin(0.7 * f + 1.3 * l),
                                      std::cos(0.9 * f + 0.7 * l),
                                      std::sin(0.5 * f + 2.1 * l));
      }
      if (cfg.joint_noise_sigma > 0.0) {
        p += cfg.joint_noise_sigma * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
      }
      joints.row(l) = p.transpose();
    }

    FrameObservation obs;
    obs.frame_index = f;
    obs.cloud = PointCloud(std::move(visible), f);
    obs.hand = HandJoints(joints);
    seq.observations.push_back(std::move(obs));

    TrajectoryEntry e;
    e.frame = f;
    e.pose.rotation = quat_from_matrix(r);
    e.pose.translation = t;
    seq.ground_truth.push_back(e);
  }
  return seq;
}

SynthConfig load_synth_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path + ": cannot open synth config");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path + ": invalid JSON: " + e.what());
  }

  SynthConfig cfg;
  auto num = [&](const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(path + ": '" + key + "' must be a number");
    return obj[key].get<double>();
  };
  auto vec3 = [&](const json& obj, const char* key, const Eigen::Vector3d& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_array() || obj[key].size() != 3) {
      throw ConfigError(path + ": '" + std::string(key) + "' must be a 3-array");
    }
    return Eigen::Vector3d(obj[key][0].get<double>(), obj[key][1].get<double>(),
                           obj[key][2].get<double>());
  };

  cfg.n_frames = static_cast<int>(num(j, "n_frames", cfg.n_frames));
  cfg.n_points = static_cast<int>(num(j, "n_points", cfg.n_points));
  cfg.point_noise_sigma = num(j, "point_noise_sigma", cfg.point_noise_sigma);
  cfg.joint_noise_sigma = num(j, "joint_noise_sigma", cfg.joint_noise_sigma);
  cfg.grasp_frame = static_cast<int>(num(j, "grasp_frame", cfg.grasp_frame));
  cfg.seed = static_cast<unsigned>(num(j, "seed", cfg.seed));
  cfg.visible_before_grasp = num(j, "visible_before_grasp", cfg.visible_before_grasp);
  cfg.visible_after_grasp = num(j, "visible_after_grasp", cfg.visible_after_grasp);
  if (j.contains("symmetric_shape")) {
    if (!j["symmetric_shape"].is_boolean()) {
      throw ConfigError(path + ": 'symmetric_shape' must be a boolean");
    }
    cfg.symmetric_shape = j["symmetric_shape"].get<bool>();
  }
  if (j.contains("occlusion_schedule")) {
    if (!j["occlusion_schedule"].is_array()) {
      throw ConfigError(path + ": 'occlusion_schedule' must be an array");
    }
    for (const auto& v : j["occlusion_schedule"]) {
      cfg.occlusion_schedule.push_back(v.get<double>());
    }
  }
  if (j.contains("motion")) {
    const json& m = j["motion"];
    cfg.motion.rot_axis = vec3(m, "rot_axis", cfg.motion.rot_axis);
    cfg.motion.rot_rate_deg = num(m, "rot_rate_deg", cfg.motion.rot_rate_deg);
    cfg.motion.rot_rate_sin_amp = num(m, "rot_rate_sin_amp", cfg.motion.rot_rate_sin_amp);
    cfg.motion.rot_rate_sin_period =
        num(m, "rot_rate_sin_period", cfg.motion.rot_rate_sin_period);
    cfg.motion.trans_vel = vec3(m, "trans_vel", cfg.motion.trans_vel);
    cfg.motion.trans_sin_amp = vec3(m, "trans_sin_amp", cfg.motion.trans_sin_amp);
    cfg.motion.trans_sin_period = num(m, "trans_sin_period", cfg.motion.trans_sin_period);
  }
  cfg.validate();
  return cfg;
}

void write_synth_sequence(const SynthSequence& seq, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<FrameRecord> records;
  records.reserve(seq.observations.size());
  for (const auto& obs : seq.observations) {
    FrameRecord rec;
    rec.frame = obs.frame_index;
    rec.object_points = obs.cloud.points();
    if (obs.hand.has_value()) {
      rec.hand_joints_3d = obs.hand->joints;
    }
    records.push_back(std::move(rec));
  }
  write_frames_jsonl(records, dir + "/frames.jsonl");
  write_trajectory_csv(seq.ground_truth, dir + "/gt_trajectory.csv");
}

}  // namespace cuetrack

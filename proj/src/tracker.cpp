#include "cuetrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <thread>

#include "cuetrack/trajectory_io.hpp"

namespace cuetrack {

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;

// Deterministic parallel map: fn(k) for k in [0, n), chunked over `degree`
// threads. Each k writes only its own slot, so scheduling cannot affect the
// result.
void parallel_for(size_t n, int degree, const std::function<void(size_t)>& fn) {
  if (degree <= 0) {
    degree = static_cast<int>(std::thread::hardware_concurrency());
    if (degree <= 0) degree = 1;
  }
  const size_t workers = std::min<size_t>(static_cast<size_t>(degree), std::max<size_t>(n, 1));
  if (workers <= 1 || n <= 1) {
    for (size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (size_t k = w; k < n; k += workers) fn(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// One pair's cue extraction and fusion. Cue availability follows the spec's
// rules: the object cue is out when ICP lacks points or is geometrically
// degenerate, the hand cue when either hand is invalid or Procrustes reports
// degenerate joints.
PairEstimate estimate_pair(const FrameObservation& a, const FrameObservation& b,
                           const CueProvider& provider, const TrackOptions& options,
                           PairLog& log) {
  PairEstimate est;
  est.i = a.frame_index;
  est.j = b.frame_index;
  log.i = est.i;
  log.j = est.j;

  IcpConfig icp_cfg = options.icp;
  // Stable per-pair seed: subsampling must not depend on thread schedule.
  icp_cfg.subsample_seed =
      options.icp.subsample_seed + 0x9e3779b9u * static_cast<unsigned>(est.i + 1);
  try {
    auto [r_obj, report] = icp_rotation(a.cloud, b.cloud, icp_cfg);
    log.icp_iterations = report.iterations;
    log.icp_residual = report.mean_residual;
    log.icp_degenerate = report.degenerate;
    if (report.degenerate) {
      log.note += "icp degenerate geometry;";
    } else {
      est.r_obj = r_obj;
      est.object_available = true;
    }
  } catch (const InsufficientPoints& e) {
    log.note += std::string("icp ") + e.side() + " insufficient points (" +
                std::to_string(e.count()) + ");";
  }

  if (a.hand_valid() && b.hand_valid()) {
    try {
      est.r_hand = weighted_procrustes(*a.hand, *b.hand, provider.weights(est.i, est.j));
      est.hand_available = true;
    } catch (const DegenerateJoints&) {
      log.note += "procrustes degenerate joints;";
    }
  } else {
    log.note += "hand invalid;";
  }

  est.alpha_requested = options.force_alpha.value_or(provider.alpha(est.i, est.j));
  try {
    const FusionResult fused = fuse_rotation(est.r_obj, est.r_hand, est.alpha_requested);
    est.r_fused = fused.rotation;
    est.alpha_effective = fused.alpha_effective;
    log.fused_available = true;
  } catch (const NoCueAvailable&) {
    log.note += "no cue available;";
  }

  log.object_available = est.object_available;
  log.hand_available = est.hand_available;
  log.alpha_requested = est.alpha_requested;
  log.alpha_effective = est.alpha_effective;
  return est;
}

}  // namespace

void RunLog::write_jsonl(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw SchemaError(path + ": cannot open run log for writing");
  }
  out << R"({"schema_version":1,"type":"runlog"})" << "\n";
  for (const auto& p : pairs) {
    out << "{\"record\":\"pair\",\"i\":" << p.i << ",\"j\":" << p.j
        << ",\"object_available\":" << (p.object_available ? "true" : "false")
        << ",\"hand_available\":" << (p.hand_available ? "true" : "false")
        << ",\"fused_available\":" << (p.fused_available ? "true" : "false")
        << ",\"alpha_requested\":" << format_double(p.alpha_requested)
        << ",\"alpha_effective\":" << format_double(p.alpha_effective)
        << ",\"icp_iterations\":" << p.icp_iterations
        << ",\"icp_residual\":" << format_double(p.icp_residual)
        << ",\"icp_degenerate\":" << (p.icp_degenerate ? "true" : "false") << ",\"note\":\""
        << p.note << "\"}\n";
  }
  for (const auto& f : frames) {
    out << "{\"record\":\"frame\",\"frame\":" << f.frame
        << ",\"translation_valid\":" << (f.translation_valid ? "true" : "false")
        << ",\"delta_clamped\":" << (f.delta_clamped ? "true" : "false") << "}\n";
  }
  for (const auto& a : anchors) {
    out << "{\"record\":\"anchor\",\"frame\":" << a.frame << ",\"candidates\":" << a.candidates
        << ",\"correction_deg\":" << format_double(a.correction_deg) << "}\n";
  }
}

TrackResult track(const std::vector<FrameObservation>& observations, const CueProvider& provider,
                  const TrackOptions& options) {
  if (observations.empty()) {
    throw std::invalid_argument("track: no observations");
  }
  for (size_t k = 1; k < observations.size(); ++k) {
    if (observations[k].frame_index <= observations[k - 1].frame_index) {
      throw std::invalid_argument("track: observations must be sorted by frame index");
    }
  }

  TrackResult result;
  const size_t n = observations.size();
  const size_t n_pairs = n - 1;

  result.pairs.resize(n_pairs);
  result.log.pairs.resize(n_pairs);
  parallel_for(n_pairs, options.parallelism, [&](size_t k) {
    result.pairs[k] = estimate_pair(observations[k], observations[k + 1], provider, options,
                                    result.log.pairs[k]);
  });

  std::vector<FrameTranslation> translations(n);
  result.log.frames.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const auto& obs = observations[k];
    translations[k].frame = obs.frame_index;
    auto& flog = result.log.frames[k];
    flog.frame = obs.frame_index;
    if (obs.cloud.empty()) {
      flog.translation_valid = false;
      continue;
    }
    const FusedTranslation ft = fused_translation(obs.cloud, provider.delta(obs.frame_index));
    translations[k].t = ft.t;
    flog.delta_clamped = ft.delta_clamped;
  }

  result.trajectory =
      compose(options.initial_pose, result.pairs, translations, options.identity_fallback);

  if (options.anchoring && n >= 2) {
    options.anchor.validate();
    // Anchor frames at multiples of the period (by position in the
    // sequence), skipping frame 0.
    std::vector<size_t> anchor_positions;
    for (size_t pos = static_cast<size_t>(options.anchor.period); pos < n;
         pos += static_cast<size_t>(options.anchor.period)) {
      anchor_positions.push_back(pos);
    }
    struct AnchorEstimate {
      int frame = 0;
      int candidates = 0;
      RotationMatrix rotation = RotationMatrix::Identity();
    };
    std::vector<AnchorEstimate> estimates(anchor_positions.size());
    parallel_for(anchor_positions.size(), options.parallelism, [&](size_t idx) {
      const size_t pos = anchor_positions[idx];
      std::vector<UnitQuaternion> candidates;
      for (int o = 1; o <= options.anchor.anchor_window; ++o) {
        for (const int side : {-1, +1}) {
          const long other = static_cast<long>(pos) + side * o;
          if (other < 0 || other >= static_cast<long>(n)) continue;
          const size_t ok = static_cast<size_t>(other);
          PairLog scratch;
          // Wide pair always estimated source -> target in ascending frame
          // order; propagate from the composed rotation at the far end.
          const size_t lo = std::min(pos, ok);
          const size_t hi = std::max(pos, ok);
          const PairEstimate wide =
              estimate_pair(observations[lo], observations[hi], provider, options, scratch);
          if (!wide.r_fused.has_value()) continue;
          const UnitQuaternion rel = quat_from_matrix(*wide.r_fused);
          const UnitQuaternion base = result.trajectory[ok].pose.rotation;
          candidates.push_back(side < 0 ? rel * base : rel.inverse() * base);
        }
      }
      estimates[idx].frame = observations[pos].frame_index;
      estimates[idx].candidates = static_cast<int>(candidates.size());
      if (!candidates.empty()) {
        estimates[idx].rotation = quaternion_mean(candidates).to_matrix();
      }
    });

    std::map<int, RotationMatrix> anchor_map;
    for (const auto& est : estimates) {
      if (est.candidates == 0) continue;  // nothing to anchor on
      anchor_map[est.frame] = est.rotation;
      AnchorLog alog;
      alog.frame = est.frame;
      alog.candidates = est.candidates;
      const TrajectoryEntry* cur = result.trajectory.find(est.frame);
      alog.correction_deg =
          geodesic_angle(quat_from_matrix(est.rotation), cur->pose.rotation) * kRadToDeg;
      result.log.anchors.push_back(alog);
    }
    if (!anchor_map.empty()) {
      result.trajectory = reanchor(result.trajectory, anchor_map, options.anchor);
    }
  }

  if (options.smoothing) {
    result.trajectory = smooth(result.trajectory, options.smooth_rotation_window,
                               options.smooth_translation_window);
  }
  return result;
}

}  // namespace cuetrack

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cuetrack/geometry.hpp"
#include "cuetrack/observation.hpp"

namespace cuetrack {

struct PairKey {
  int i = 0;
  int j = 0;
  auto operator<=>(const PairKey&) const = default;
};

/// Materialized per-pair blending coefficients and joint weights plus
/// per-frame translation residuals, as produced by a provider or read from a
/// sidecar file.
struct CueProviderOutput {
  std::map<PairKey, double> alpha;
  std::map<PairKey, JointWeights> weights;
  std::map<int, Eigen::Vector3d> delta;
};

/// Source of (alpha, weights, delta) for arbitrary frame pairs. The paper's
/// learned predictor is one possible implementation; the library ships a
/// deterministic visibility heuristic and a file-backed provider.
class CueProvider {
 public:
  virtual ~CueProvider() = default;

  virtual double alpha(int i, int j) const = 0;
  virtual JointWeights weights(int i, int j) const = 0;
  virtual Eigen::Vector3d delta(int frame) const = 0;
  virtual std::string name() const = 0;
};

/// alpha(i,j) = 1 - min(1, min(K_i, K_j) / K_ref) where K_ref is the
/// nearest-rank 95th percentile of per-frame point counts; uniform joint
/// weights; zero delta. Invariant under uniform rescaling of all counts.
class HeuristicProvider : public CueProvider {
 public:
  struct Config {
    double percentile = 0.95;
  };

  explicit HeuristicProvider(const std::vector<FrameObservation>& observations)
      : HeuristicProvider(observations, Config{}) {}
  HeuristicProvider(const std::vector<FrameObservation>& observations, Config cfg);

  double alpha(int i, int j) const override;
  JointWeights weights(int, int) const override { return JointWeights::uniform(); }
  Eigen::Vector3d delta(int) const override { return Eigen::Vector3d::Zero(); }
  std::string name() const override { return "heuristic"; }

  double reference_count() const { return k_ref_; }

 private:
  std::map<int, double> counts_;
  double k_ref_ = 0.0;
};

/// Sidecar-backed provider. Pairs or frames missing from the file fall back
/// to an inner provider; each fallback is counted and reported.
class FileProvider : public CueProvider {
 public:
  FileProvider(CueProviderOutput data, std::shared_ptr<const CueProvider> fallback);

  // Parses the JSON Lines sidecar. Unknown fields are ignored. Throws
  // SchemaError (with line/field diagnostics) on malformed records and
  // RangeError when alpha leaves [0,1] beyond 1e-6 slack.
  static CueProviderOutput parse_sidecar(const std::string& path);

  double alpha(int i, int j) const override;
  JointWeights weights(int i, int j) const override;
  Eigen::Vector3d delta(int frame) const override;
  std::string name() const override { return "file"; }

  long fallback_count() const { return fallback_count_; }
  const CueProviderOutput& data() const { return data_; }

 private:
  CueProviderOutput data_;
  std::shared_ptr<const CueProvider> fallback_;
  mutable long fallback_count_ = 0;
};

// Spec-level convenience: heuristic output materialized for consecutive
// frame pairs of the sequence.
CueProviderOutput heuristic_provider(const std::vector<FrameObservation>& observations,
                                     HeuristicProvider::Config cfg = {});

struct FusionResult {
  RotationMatrix rotation;
  double alpha_effective = 0.0;
};

/// Blend object- and hand-derived relative rotations by quaternion slerp with
/// parameter alpha (0 = object, 1 = hand). With one cue absent the other is
/// returned and alpha_effective pinned to 0 (object only) or 1 (hand only).
/// Throws NoCueAvailable when both are absent.
FusionResult fuse_rotation(const std::optional<RotationMatrix>& r_obj,
                           const std::optional<RotationMatrix>& r_hand, double alpha);

// Direction-preserving hard cap of the translation residual at 2 sigma.
Eigen::Vector3d clamp_delta(const Eigen::Vector3d& delta, double sigma, bool* clamped = nullptr);

struct FusedTranslation {
  Eigen::Vector3d t;
  bool delta_clamped = false;
};

/// t = centroid + delta, with delta capped at 2x the cloud scale. Throws
/// EmptyCloud for an empty cloud (callers mark the frame invalid and let the
/// trajectory stage interpolate it).
FusedTranslation fused_translation(const PointCloud& cloud, const Eigen::Vector3d& delta);

/// Per-pair estimation record: the raw cues, their availability, and the
/// fused result. r_fused is absent only when both cues are missing.
struct PairEstimate {
  int i = 0;
  int j = 0;
  std::optional<RotationMatrix> r_obj;
  std::optional<RotationMatrix> r_hand;
  std::optional<RotationMatrix> r_fused;
  double alpha_requested = 0.0;
  double alpha_effective = 0.0;
  bool object_available = false;
  bool hand_available = false;
};

}  // namespace cuetrack

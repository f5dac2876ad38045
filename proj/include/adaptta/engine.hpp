#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaptta/backend.hpp"
#include "adaptta/policy.hpp"

namespace adaptta {

/// Running class-wise sum of per-view probabilities. The average is formed
/// on demand as sum / count, so any two runs that fold the same vectors in
/// the same order agree bit for bit.
class AggregationState {
 public:
  AggregationState() = default;
  explicit AggregationState(std::size_t num_classes) : sum_(num_classes, 0.0) {}

  /// Folds in one prediction. The first call fixes C when the state was
  /// default constructed. Throws ProbabilityError on a class-count mismatch.
  void add(const ProbVector& p);

  std::size_t count() const noexcept { return count_; }
  std::size_t num_classes() const noexcept { return sum_.size(); }
  std::span<const double> sum() const noexcept { return sum_; }

  /// Requires count() >= 1.
  std::vector<double> average() const;

 private:
  std::vector<double> sum_;
  std::size_t count_ = 0;
};

/// Functional form of AggregationState::add.
AggregationState aggregate(AggregationState state, const ProbVector& p);

/// Largest minus second-largest entry. Requires at least two entries.
double confidence_score(std::span<const double> avg);
inline double confidence_score(const ProbVector& avg) { return confidence_score(avg.values()); }

/// Index of the maximum entry, ties going to the lowest index.
std::size_t decide_label(std::span<const double> avg);
inline std::size_t decide_label(const ProbVector& avg) { return decide_label(avg.values()); }

enum class ExecutionMode { kSequential, kBatch, kAdaptive };

std::string_view to_string(ExecutionMode mode);
/// Accepts "seq"/"sequential", "batch", "adaptive". Throws ConfigError.
ExecutionMode parse_mode(std::string_view text);

struct AdapttaConfig {
  /// Throws ConfigError unless 0 <= tau <= 1.
  AdapttaConfig(double tau, TransformPolicy policy, ExecutionMode mode);

  double tau;
  TransformPolicy policy;
  ExecutionMode mode;
};

/// One input to the engine. `image` holds the decoded source for pixel
/// backends and is empty for trace replay.
struct Sample {
  std::string id;
  std::optional<Image> image;
};

struct PredictionOutcome {
  std::size_t label = 0;
  double confidence = 0.0;
  std::size_t inferences_used = 0;
  std::vector<ProbVector> per_view_probs;
  std::vector<double> avg_probs;

  friend bool operator==(const PredictionOutcome&, const PredictionOutcome&) = default;
};

/// Confidence-gated TTA. Views are produced lazily in policy order; after
/// each inference the running average and its confidence score are
/// updated, and the loop stops as soon as the score is strictly greater than
/// cfg.tau, or once every view has been evaluated. Backend failures are
/// rethrown as ViewError carrying the view index.
PredictionOutcome run_adaptta(const Backend& backend, const Sample& sample, const AdapttaConfig& cfg);

/// Static TTA: all N views, evaluated one by one (kSequential) or through a
/// single predict_batch call (kBatch). Both produce identical outcomes.
PredictionOutcome run_static(const Backend& backend, const Sample& sample, const AdapttaConfig& cfg);

/// Dispatches on cfg.mode.
PredictionOutcome run(const Backend& backend, const Sample& sample, const AdapttaConfig& cfg);

/// Overloads for pixel backends working on a bare image.
PredictionOutcome run_adaptta(const Backend& backend, const Image& img, const AdapttaConfig& cfg);
PredictionOutcome run_static(const Backend& backend, const Image& img, const AdapttaConfig& cfg);

}  // namespace adaptta

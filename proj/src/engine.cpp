#include "adaptta/engine.hpp"

#include <string>

#include "adaptta/errors.hpp"

namespace adaptta {

void AggregationState::add(const ProbVector& p) {
  if (count_ == 0 && sum_.empty()) {
    sum_.assign(p.size(), 0.0);
  }
  if (p.size() != sum_.size()) {
    throw ProbabilityError("cannot aggregate " + std::to_string(p.size()) + "-class vector into " +
                           std::to_string(sum_.size()) + "-class state");
  }
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    sum_[i] += p[i];
  }
  ++count_;
}

std::vector<double> AggregationState::average() const {
  if (count_ == 0) {
    throw ProbabilityError("average of an empty aggregation");
  }
  std::vector<double> avg(sum_.size());
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    avg[i] = sum_[i] / n;
  }
  return avg;
}

AggregationState aggregate(AggregationState state, const ProbVector& p) {
  state.add(p);
  return state;
}

double confidence_score(std::span<const double> avg) {
  if (avg.size() < 2) {
    throw ProbabilityError("confidence score needs at least 2 classes");
  }
  double first = avg[0];
  double second = avg[1];
  if (second > first) std::swap(first, second);
  for (std::size_t i = 2; i < avg.size(); ++i) {
    const double v = avg[i];
    if (v > first) {
      second = first;
      first = v;
    } else if (v > second) {
      second = v;
    }
  }
  return first - second;
}

std::size_t decide_label(std::span<const double> avg) {
  if (avg.empty()) {
    throw ProbabilityError("cannot decide a label from an empty vector");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < avg.size(); ++i) {
    if (avg[i] > avg[best]) best = i;
  }
  return best;
}

std::string_view to_string(ExecutionMode mode) {
  switch (mode) {
    case ExecutionMode::kSequential:
      return "sequential";
    case ExecutionMode::kBatch:
      return "batch";
    case ExecutionMode::kAdaptive:
      return "adaptive";
  }
  return "unknown";
}

ExecutionMode parse_mode(std::string_view text) {
  if (text == "seq" || text == "sequential") return ExecutionMode::kSequential;
  if (text == "batch") return ExecutionMode::kBatch;
  if (text == "adaptive") return ExecutionMode::kAdaptive;
  throw ConfigError("unknown execution mode '" + std::string(text) + "'");
}

AdapttaConfig::AdapttaConfig(double tau_, TransformPolicy policy_, ExecutionMode mode_)
    : tau(tau_), policy(std::move(policy_)), mode(mode_) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ConfigError("tau must lie in [0, 1], got " + std::to_string(tau));
  }
}

namespace {

// Produces the views of one sample on demand. For pixel backends the source
// is resized once, on first use, and each view is cropped when requested.
class ViewSource {
 public:
  ViewSource(const Backend& backend, const Sample& sample, const TransformPolicy& policy)
      : backend_(backend), sample_(sample), policy_(policy) {}

  std::optional<Image> materialize(std::size_t index) {
    if (!backend_.consumes_pixels()) return std::nullopt;
    if (!source_) {
      if (!sample_.image) {
        throw DataError("sample '" + sample_.id + "' has no image but the backend needs pixels");
      }
      source_ = prepare_source(*sample_.image, policy_.source_side());
    }
    return crop(*source_, policy_.views()[index]);
  }

  ViewRef ref(std::size_t index, const std::optional<Image>& pixels) const {
    return ViewRef{sample_.id, index, pixels ? &*pixels : nullptr};
  }

 private:
  const Backend& backend_;
  const Sample& sample_;
  const TransformPolicy& policy_;
  std::optional<Image> source_;
};

ProbVector predict_view(const Backend& backend, ViewSource& views, std::size_t index) {
  try {
    const auto pixels = views.materialize(index);
    return backend.predict(views.ref(index, pixels));
  } catch (const ViewError&) {
    throw;
  } catch (const DataError&) {
    throw;
  } catch (const Error& e) {
    throw ViewError(index, e.what());
  }
}

PredictionOutcome finish(const AggregationState& state, std::vector<ProbVector> per_view) {
  PredictionOutcome out;
  out.avg_probs = state.average();
  out.label = decide_label(out.avg_probs);
  out.confidence = confidence_score(out.avg_probs);
  out.inferences_used = state.count();
  out.per_view_probs = std::move(per_view);
  return out;
}

}  // namespace

PredictionOutcome run_adaptta(const Backend& backend, const Sample& sample, const AdapttaConfig& cfg) {
  if (cfg.mode != ExecutionMode::kAdaptive) {
    throw ConfigError("run_adaptta requires adaptive mode");
  }
  ViewSource views(backend, sample, cfg.policy);
  AggregationState state(backend.num_classes());
  std::vector<ProbVector> per_view;
  per_view.reserve(cfg.policy.size());
  for (std::size_t i = 0; i < cfg.policy.size(); ++i) {
    per_view.push_back(predict_view(backend, views, i));
    state.add(per_view.back());
    const auto avg = state.average();
    if (confidence_score(avg) > cfg.tau) break;
  }
  return finish(state, std::move(per_view));
}

PredictionOutcome run_static(const Backend& backend, const Sample& sample, const AdapttaConfig& cfg) {
  const std::size_t n = cfg.policy.size();
  ViewSource views(backend, sample, cfg.policy);
  AggregationState state(backend.num_classes());
  std::vector<ProbVector> per_view;
  switch (cfg.mode) {
    case ExecutionMode::kSequential:
      per_view.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        per_view.push_back(predict_view(backend, views, i));
      }
      break;
    case ExecutionMode::kBatch: {
      std::vector<std::optional<Image>> pixels;
      pixels.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        pixels.push_back(views.materialize(i));
      }
      std::vector<ViewRef> refs;
      refs.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        refs.push_back(views.ref(i, pixels[i]));
      }
      per_view = backend.predict_batch(refs);
      break;
    }
    case ExecutionMode::kAdaptive:
      throw ConfigError("run_static requires sequential or batch mode");
  }
  for (const auto& p : per_view) {
    state.add(p);
  }
  return finish(state, std::move(per_view));
}

PredictionOutcome run(const Backend& backend, const Sample& sample, const AdapttaConfig& cfg) {
  return cfg.mode == ExecutionMode::kAdaptive ? run_adaptta(backend, sample, cfg)
                                              : run_static(backend, sample, cfg);
}

PredictionOutcome run_adaptta(const Backend& backend, const Image& img, const AdapttaConfig& cfg) {
  return run_adaptta(backend, Sample{{}, img}, cfg);
}

PredictionOutcome run_static(const Backend& backend, const Image& img, const AdapttaConfig& cfg) {
  return run_static(backend, Sample{{}, img}, cfg);
}

}  // namespace adaptta

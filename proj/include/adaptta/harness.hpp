#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adaptta/engine.hpp"
#include "adaptta/latency.hpp"
#include "adaptta/trace.hpp"

namespace adaptta {

struct ManifestEntry {
  std::string sample_id;
  std::string path;  // empty for trace-backed entries
  int label = 0;
};

/// List of labelled samples. Sample ids are unique and labels lie in
/// [0, num_classes).
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::size_t num_classes = 0;

  /// Throws DataError when an invariant is violated.
  void validate() const;
};

/// Reads `sample_id<TAB>path<TAB>label` lines. Relative paths are resolved
/// against the manifest's directory. Blank lines and lines starting with
/// '#' are skipped.
DatasetManifest read_manifest(const std::filesystem::path& path, std::size_t num_classes);

/// Every sample of the trace with its recorded label.
DatasetManifest manifest_from_trace(const TraceBackend& trace);

/// Samples ready for the engine, with their ground-truth labels.
struct Dataset {
  std::vector<Sample> samples;
  std::vector<int> labels;
  std::size_t num_classes = 0;
};

/// Decodes images when the backend consumes pixels; otherwise checks that
/// the backend knows every sample (when it is a trace) and carries ids only.
/// Decode time is not part of any latency measurement.
Dataset load_dataset(const DatasetManifest& manifest, const Backend& backend);

struct WallClock {};
using LatencySource = std::variant<WallClock, LatencyModel>;

struct BenchmarkReport {
  ExecutionMode mode = ExecutionMode::kSequential;
  std::string policy;
  double tau = 0.0;
  std::size_t samples = 0;
  double top1_accuracy = 0.0;
  double accuracy_gain_vs_single = 0.0;
  double avg_inferences = 0.0;
  double avg_latency_ms = 0.0;
  double avg_fps = 0.0;
  /// Sequential latency divided by this report's latency. Known directly
  /// under simulated latency; filled in by compare_modes for wall clock.
  std::optional<double> speedup_vs_seq;
  std::string latency_source;  // "wall_clock" | "simulated"

  // Extra fields beyond the mean.
  double median_latency_ms = 0.0;
  double p95_latency_ms = 0.0;
  double baseline_top1 = 0.0;
  std::string latency_scope;
  std::vector<std::size_t> inferences_per_sample;
};

/// Simulated per-sample latency: crop (+ flip when mirrored) for each of the
/// first `views_used` views plus the inference charge for `mode`. Batch mode
/// charges batch_ms(N) once.
double simulated_sample_latency_ms(const LatencyModel& model, const TransformPolicy& policy,
                                   ExecutionMode mode, std::size_t views_used);

/// Runs the configured executor over every sample. Throws DataError on an
/// empty dataset.
BenchmarkReport evaluate(const Backend& backend, const Dataset& data, const AdapttaConfig& cfg,
                         const LatencySource& latency);
BenchmarkReport evaluate(const Backend& backend, const DatasetManifest& manifest,
                         const AdapttaConfig& cfg, const LatencySource& latency);

/// Top-1 accuracy of the center view alone (the policy's first view).
double baseline_single(const Backend& backend, const Dataset& data, const TransformPolicy& policy);
double baseline_single(const Backend& backend, const DatasetManifest& manifest,
                       const TransformPolicy& policy);

/// One report per tau, ordered by increasing tau. Throws ConfigError on an
/// empty list or a tau outside [0, 1].
std::vector<BenchmarkReport> sweep_tau(const Backend& backend, const Dataset& data,
                                       const AdapttaConfig& cfg, std::vector<double> taus,
                                       const LatencySource& latency);

struct ModeComparison {
  BenchmarkReport batch;
  BenchmarkReport sequential;
  BenchmarkReport adaptive;
};

/// Batch-TTA, Seq-TTA and AdapTTA on the same data; speedup_vs_seq is set on
/// all three reports.
ModeComparison compare_modes(const Backend& backend, const Dataset& data,
                             const TransformPolicy& policy, double tau,
                             const LatencySource& latency);

}  // namespace adaptta

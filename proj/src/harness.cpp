#include "adaptta/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "adaptta/errors.hpp"

namespace adaptta {

void DatasetManifest::validate() const {
  if (num_classes < 2) {
    throw DataError("manifest needs at least 2 classes");
  }
  std::unordered_set<std::string> seen;
  for (const auto& e : entries) {
    if (e.sample_id.empty()) {
      throw DataError("manifest contains an empty sample id");
    }
    if (!seen.insert(e.sample_id).second) {
      throw DataError("duplicate sample id '" + e.sample_id + "' in manifest");
    }
    if (e.label < 0 || static_cast<std::size_t>(e.label) >= num_classes) {
      throw DataError("label " + std::to_string(e.label) + " of sample '" + e.sample_id + "' is outside [0, " +
                      std::to_string(num_classes) + ")");
    }
  }
}

DatasetManifest read_manifest(const std::filesystem::path& path, std::size_t num_classes) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open manifest " + path.string());
  }
  DatasetManifest manifest;
  manifest.num_classes = num_classes;
  const auto base = path.parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw DataError("manifest line " + std::to_string(line_no) + ": expected sample_id<TAB>path<TAB>label");
    }
    ManifestEntry e;
    e.sample_id = line.substr(0, t1);
    std::filesystem::path p = line.substr(t1 + 1, t2 - t1 - 1);
    e.path = (p.is_relative() ? base / p : p).string();
    const std::string label = line.substr(t2 + 1);
    const auto [end, ec] = std::from_chars(label.data(), label.data() + label.size(), e.label);
    if (ec != std::errc() || end != label.data() + label.size()) {
      throw DataError("manifest line " + std::to_string(line_no) + ": label '" + label + "' is not an integer");
    }
    manifest.entries.push_back(std::move(e));
  }
  manifest.validate();
  return manifest;
}

DatasetManifest manifest_from_trace(const TraceBackend& trace) {
  DatasetManifest manifest;
  manifest.num_classes = trace.num_classes();
  for (const auto& s : trace.samples()) {
    manifest.entries.push_back({s.id, {}, s.label});
  }
  return manifest;
}

Dataset load_dataset(const DatasetManifest& manifest, const Backend& backend) {
  manifest.validate();
  if (manifest.num_classes != backend.num_classes()) {
    throw DataError("manifest declares " + std::to_string(manifest.num_classes) + " classes, backend has " +
                    std::to_string(backend.num_classes()));
  }
  const auto* trace = dynamic_cast<const TraceBackend*>(&backend);
  Dataset data;
  data.num_classes = manifest.num_classes;
  for (const auto& e : manifest.entries) {
    Sample s{e.sample_id, std::nullopt};
    if (backend.consumes_pixels()) {
      if (e.path.empty()) {
        throw DataError("sample '" + e.sample_id + "' has no image path");
      }
      s.image = read_ppm(e.path);
    } else if (trace != nullptr) {
      try {
        (void)trace->row(e.sample_id, 0);
      } catch (const TraceError&) {
        throw DataError("sample '" + e.sample_id + "' is not covered by the trace");
      }
    }
    data.samples.push_back(std::move(s));
    data.labels.push_back(e.label);
  }
  return data;
}

double simulated_sample_latency_ms(const LatencyModel& model, const TransformPolicy& policy, ExecutionMode mode,
                                   std::size_t views_used) {
  views_used = std::min(views_used, policy.size());
  double transform = 0.0;
  for (std::size_t i = 0; i < views_used; ++i) {
    transform += model.per_crop_ms();
    if (policy.views()[i].hflip) transform += model.per_flip_ms();
  }
  const double inference = mode == ExecutionMode::kBatch
                               ? model.batch_ms(policy.size())
                               : model.per_inference_ms() * static_cast<double>(views_used);
  return transform + inference;
}

namespace {

double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  // Nearest rank.
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

BenchmarkReport evaluate(const Backend& backend, const Dataset& data, const AdapttaConfig& cfg,
                         const LatencySource& latency) {
  if (data.samples.empty()) {
    throw DataError("cannot evaluate an empty dataset");
  }
  const auto* model = std::get_if<LatencyModel>(&latency);
  BenchmarkReport report;
  report.mode = cfg.mode;
  report.policy = cfg.policy.name();
  report.tau = cfg.tau;
  report.samples = data.samples.size();
  report.latency_source = model ? "simulated" : "wall_clock";
  report.latency_scope = model ? "crop+flip+inference (latency model)"
                               : "resize+crop+flip+inference (decode excluded)";

  std::vector<double> latencies;
  latencies.reserve(data.samples.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    PredictionOutcome outcome;
    if (model) {
      outcome = run(backend, data.samples[i], cfg);
      latencies.push_back(simulated_sample_latency_ms(*model, cfg.policy, cfg.mode, outcome.inferences_used));
    } else {
      const auto start = std::chrono::steady_clock::now();
      outcome = run(backend, data.samples[i], cfg);
      const auto stop = std::chrono::steady_clock::now();
      latencies.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    if (static_cast<int>(outcome.label) == data.labels[i]) ++correct;
    report.inferences_per_sample.push_back(outcome.inferences_used);
  }

  const double n = static_cast<double>(data.samples.size());
  report.top1_accuracy = static_cast<double>(correct) / n;
  report.avg_inferences =
      static_cast<double>(std::accumulate(report.inferences_per_sample.begin(), report.inferences_per_sample.end(),
                                          std::size_t{0})) /
      n;
  report.avg_latency_ms = std::accumulate(latencies.begin(), latencies.end(), 0.0) / n;
  report.avg_fps = report.avg_latency_ms > 0.0 ? 1000.0 / report.avg_latency_ms : 0.0;
  report.median_latency_ms = median(latencies);
  report.p95_latency_ms = percentile(latencies, 0.95);
  if (model && report.avg_latency_ms > 0.0) {
    const double seq = simulated_sample_latency_ms(*model, cfg.policy, ExecutionMode::kSequential, cfg.policy.size());
    report.speedup_vs_seq = seq / report.avg_latency_ms;
  }
  report.baseline_top1 = baseline_single(backend, data, cfg.policy);
  report.accuracy_gain_vs_single = report.top1_accuracy - report.baseline_top1;
  return report;
}

BenchmarkReport evaluate(const Backend& backend, const DatasetManifest& manifest, const AdapttaConfig& cfg,
                         const LatencySource& latency) {
  return evaluate(backend, load_dataset(manifest, backend), cfg, latency);
}

double baseline_single(const Backend& backend, const Dataset& data, const TransformPolicy& policy) {
  if (data.samples.empty()) {
    throw DataError("cannot evaluate an empty dataset");
  }
  const AdapttaConfig center(0.0,
                             TransformPolicy("center", {policy.views().front()}, policy.source_side(),
                                             policy.view_side()),
                             ExecutionMode::kSequential);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    if (static_cast<int>(run_static(backend, data.samples[i], center).label) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.samples.size());
}

double baseline_single(const Backend& backend, const DatasetManifest& manifest, const TransformPolicy& policy) {
  return baseline_single(backend, load_dataset(manifest, backend), policy);
}

std::vector<BenchmarkReport> sweep_tau(const Backend& backend, const Dataset& data, const AdapttaConfig& cfg,
                                       std::vector<double> taus, const LatencySource& latency) {
  if (taus.empty()) {
    throw ConfigError("tau sweep needs at least one value");
  }
  std::sort(taus.begin(), taus.end());
  std::vector<BenchmarkReport> reports;
  reports.reserve(taus.size());
  for (const double tau : taus) {
    const AdapttaConfig step(tau, cfg.policy, ExecutionMode::kAdaptive);
    reports.push_back(evaluate(backend, data, step, latency));
  }
  return reports;
}

ModeComparison compare_modes(const Backend& backend, const Dataset& data, const TransformPolicy& policy, double tau,
                             const LatencySource& latency) {
  ModeComparison out{
      evaluate(backend, data, AdapttaConfig(tau, policy, ExecutionMode::kBatch), latency),
      evaluate(backend, data, AdapttaConfig(tau, policy, ExecutionMode::kSequential), latency),
      evaluate(backend, data, AdapttaConfig(tau, policy, ExecutionMode::kAdaptive), latency),
  };
  const double seq = out.sequential.avg_latency_ms;
  for (BenchmarkReport* r : {&out.batch, &out.sequential, &out.adaptive}) {
    if (r->avg_latency_ms > 0.0) r->speedup_vs_seq = seq / r->avg_latency_ms;
  }
  return out;
}

}  // namespace adaptta

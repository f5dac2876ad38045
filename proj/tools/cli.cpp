#include "adaptta/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adaptta/errors.hpp"
#include "adaptta/report.hpp"
#include "adaptta/toy_classifier.hpp"
#include "adaptta/trace.hpp"

namespace adaptta::cli {

namespace {

double parse_ms(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("latency field '" + std::string(key) + "' has invalid value '" + std::string(text) + "'");
  }
  return v;
}

struct Options {
  std::string trace;
  std::optional<std::uint64_t> toy_seed;
  std::optional<std::size_t> classes;
  std::string manifest;
  std::string policy;
  double tau = 0.8;
  std::string mode = "adaptive";
  std::string latency = "wall";
  std::string out;
  std::string format = "json";
  std::vector<double> taus;
};

// Everything a subcommand needs once the flags have been checked.
struct Setup {
  std::unique_ptr<Backend> backend;
  TransformPolicy policy;
  Dataset data;
};

void check_backend_flags(const Options& o) {
  const bool trace = !o.trace.empty();
  const bool toy = o.toy_seed.has_value();
  if (trace == toy) {
    throw ConfigError("exactly one backend is required: --trace PATH or --toy-seed INT --classes INT");
  }
  if (toy && !o.classes) {
    throw ConfigError("--toy-seed requires --classes");
  }
  if (trace && o.classes) {
    throw ConfigError("--classes applies to the toy backend only");
  }
  if (toy && o.manifest.empty()) {
    throw ConfigError("the toy backend requires --manifest");
  }
  if (!(o.tau >= 0.0 && o.tau <= 1.0)) {
    throw ConfigError("--tau must lie in [0, 1]");
  }
}

Setup make_setup(const Options& o) {
  check_backend_flags(o);
  if (!o.trace.empty()) {
    auto trace = std::make_unique<TraceBackend>(load_trace(o.trace));
    const std::string& recorded = trace->header().policy;
    const std::string name = o.policy.empty() ? recorded : o.policy;
    if (name != recorded) {
      throw DataError("trace was recorded with policy " + recorded + ", requested " + name);
    }
    std::optional<TransformPolicy> policy;
    try {
      policy = make_policy(name);
    } catch (const ConfigError& e) {
      throw DataError(std::string("trace policy is not supported by the CLI: ") + e.what());
    }
    const DatasetManifest manifest =
        o.manifest.empty() ? manifest_from_trace(*trace) : read_manifest(o.manifest, trace->num_classes());
    Dataset data = load_dataset(manifest, *trace);
    return {std::move(trace), std::move(*policy), std::move(data)};
  }
  TransformPolicy policy = make_policy(o.policy.empty() ? "5C" : o.policy);
  auto toy = std::make_unique<ToyClassifier>(*o.toy_seed, *o.classes, policy.view_side());
  Dataset data = load_dataset(read_manifest(o.manifest, *o.classes), *toy);
  return {std::move(toy), std::move(policy), std::move(data)};
}

void emit(const Options& o, std::ostream& out, const std::vector<BenchmarkReport>& reports, bool single) {
  std::string text;
  if (o.format == "csv") {
    text = to_csv(reports);
  } else if (single) {
    text = to_json(reports.front()).dump(2) + "\n";
  } else {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    text = arr.dump(2) + "\n";
  }
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file || !(file << text)) {
    throw DataError("cannot write report to " + o.out);
  }
}

int cmd_run(const Options& o, std::ostream& out) {
  const auto latency = parse_latency(o.latency);
  const ExecutionMode mode = parse_mode(o.mode);
  Setup s = make_setup(o);
  const AdapttaConfig cfg(o.tau, s.policy, mode);
  emit(o, out, {evaluate(*s.backend, s.data, cfg, latency)}, true);
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto latency = parse_latency(o.latency);
  for (double t : o.taus) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("--taus values must lie in [0, 1]");
  }
  Setup s = make_setup(o);
  const AdapttaConfig cfg(o.tau, s.policy, ExecutionMode::kAdaptive);
  emit(o, out, sweep_tau(*s.backend, s.data, cfg, o.taus, latency), false);
  return kOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const auto latency = parse_latency(o.latency);
  Setup s = make_setup(o);
  const auto cmp = compare_modes(*s.backend, s.data, s.policy, o.tau, latency);
  emit(o, out, {cmp.batch, cmp.sequential, cmp.adaptive}, false);
  return kOk;
}

int cmd_gen_trace(const Options& o, std::ostream& out) {
  if (!o.toy_seed || !o.classes || o.manifest.empty()) {
    throw ConfigError("gen-trace requires --manifest, --toy-seed and --classes");
  }
  if (!o.trace.empty()) {
    throw ConfigError("gen-trace produces a trace; --trace is not accepted");
  }
  const TransformPolicy policy = make_policy(o.policy.empty() ? "5C" : o.policy);
  const ToyClassifier toy(*o.toy_seed, *o.classes, policy.view_side());
  const DatasetManifest manifest = read_manifest(o.manifest, *o.classes);

  std::vector<TraceRecord> records;
  for (const auto& e : manifest.entries) {
    const Image source = prepare_source(read_ppm(e.path), policy.source_side());
    for (std::size_t v = 0; v < policy.size(); ++v) {
      const Image view = crop(source, policy.views()[v]);
      records.push_back(TraceRecord{e.sample_id, v, predict(toy, view), e.label});
    }
  }
  const TraceHeader header{*o.classes, policy.name(), policy.size()};
  if (o.out.empty()) {
    write_trace(out, header, records);
    return kOk;
  }
  std::ofstream file(o.out);
  if (!file) {
    throw DataError("cannot write trace to " + o.out);
  }
  write_trace(file, header, records);
  if (!file) {
    throw DataError("failed writing trace to " + o.out);
  }
  nlohmann::ordered_json summary;
  summary["trace"] = o.out;
  summary["policy"] = policy.name();
  summary["classes"] = *o.classes;
  summary["samples"] = manifest.entries.size();
  summary["rows"] = records.size();
  out << summary.dump(2) << "\n";
  return kOk;
}

void add_backend_flags(CLI::App* sub, Options& o) {
  sub->add_option("--trace", o.trace, "Trace file (JSON Lines) to replay");
  sub->add_option("--toy-seed", o.toy_seed, "Seed of the built-in toy classifier");
  sub->add_option("--classes", o.classes, "Class count of the toy classifier")->check(CLI::Range(2, 1 << 20));
  sub->add_option("--manifest", o.manifest, "sample_id<TAB>path<TAB>label file");
  sub->add_option("--policy", o.policy, "Augmentation policy")->check(CLI::IsMember({"5C", "10C"}));
}

void add_eval_flags(CLI::App* sub, Options& o) {
  add_backend_flags(sub, o);
  sub->add_option("--tau", o.tau, "Confidence threshold in [0, 1]")->capture_default_str();
  sub->add_option("--latency", o.latency, "wall | sim[:per-inference=MS,crop=MS,flip=MS,batchN=MS,...]")
      ->capture_default_str();
  sub->add_option("--out", o.out, "Write the report here instead of stdout");
  sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

}  // namespace

LatencySource parse_latency(std::string_view text) {
  if (text == "wall") return WallClock{};
  if (text.substr(0, 3) != "sim" || (text.size() > 3 && text[3] != ':')) {
    throw ConfigError("--latency must be 'wall' or 'sim[:...]', got '" + std::string(text) + "'");
  }
  std::optional<LatencyModel> preset;
  std::optional<double> per_inference, crop, flip;
  std::map<std::size_t, double> curve;
  std::string_view rest = text.size() > 4 ? text.substr(4) : std::string_view{};
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    if (item == "mobilenet-v1" || item == "mobilenet-v2") {
      preset = item == "mobilenet-v1" ? LatencyModel::mobilenet_v1() : LatencyModel::mobilenet_v2();
      continue;
    }
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("latency field '" + std::string(item) + "' is not key=value");
    }
    const std::string_view key = item.substr(0, eq);
    const double value = parse_ms(key, item.substr(eq + 1));
    if (key == "per-inference") {
      per_inference = value;
    } else if (key == "crop") {
      crop = value;
    } else if (key == "flip") {
      flip = value;
    } else if (key.substr(0, 5) == "batch" && key.size() > 5) {
      std::size_t n = 0;
      const auto digits = key.substr(5);
      const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
      if (ec != std::errc() || end != digits.data() + digits.size() || n == 0) {
        throw ConfigError("invalid batch size in latency field '" + std::string(key) + "'");
      }
      curve[n] = value;
    } else {
      throw ConfigError("unknown latency field '" + std::string(key) + "'");
    }
  }
  const double inf = per_inference.value_or(preset ? preset->per_inference_ms() : 53.1);
  const double c = crop.value_or(preset ? preset->per_crop_ms() : LatencyModel::kDefaultCropMs);
  const double f = flip.value_or(preset ? preset->per_flip_ms() : LatencyModel::kDefaultFlipMs);
  if (!curve.empty()) {
    return LatencyModel(inf, c, f, std::move(curve));
  }
  if (preset && !per_inference) {
    return LatencyModel(inf, c, f, preset->batch_curve());
  }
  return LatencyModel(inf, c, f);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Adaptive test-time augmentation benchmark", "adaptta"};
  app.set_config("--config", "", "TOML-style config file; flags override its values");
  app.require_subcommand(1, 1);

  auto* run = app.add_subcommand("run", "Evaluate one execution mode");
  add_eval_flags(run, o);
  run->add_option("--mode", o.mode, "Execution mode")
      ->check(CLI::IsMember({"seq", "sequential", "batch", "adaptive"}))
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "AdapTTA over a list of thresholds");
  add_eval_flags(sweep, o);
  sweep->add_option("--taus", o.taus, "Comma-separated thresholds")->delimiter(',')->required();

  auto* compare = app.add_subcommand("compare", "Batch-TTA vs Seq-TTA vs AdapTTA");
  add_eval_flags(compare, o);

  auto* gen = app.add_subcommand("gen-trace", "Record toy-classifier predictions for every policy view");
  add_backend_flags(gen, o);
  gen->add_option("--out", o.out, "Trace destination (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::Success&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "adaptta: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (compare->parsed()) return cmd_compare(o, out);
    return cmd_gen_trace(o, out);
  } catch (const ConfigError& e) {
    err << "adaptta: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "adaptta: " << e.what() << "\n";
    return kInputData;
  } catch (const std::exception& e) {
    err << "adaptta: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace adaptta::cli

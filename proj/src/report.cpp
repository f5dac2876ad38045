#include "adaptta/report.hpp"

#include <iomanip>
#include <limits>
#include <sstream>

namespace adaptta {

nlohmann::ordered_json to_json(const BenchmarkReport& r) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(r.mode));
  j["policy"] = r.policy;
  j["tau"] = r.tau;
  j["samples"] = r.samples;
  j["top1_accuracy"] = r.top1_accuracy;
  j["accuracy_gain_vs_single"] = r.accuracy_gain_vs_single;
  j["avg_inferences"] = r.avg_inferences;
  j["avg_latency_ms"] = r.avg_latency_ms;
  j["avg_fps"] = r.avg_fps;
  j["speedup_vs_seq"] = r.speedup_vs_seq ? nlohmann::ordered_json(*r.speedup_vs_seq) : nlohmann::ordered_json();
  j["latency_source"] = r.latency_source;
  j["median_latency_ms"] = r.median_latency_ms;
  j["p95_latency_ms"] = r.p95_latency_ms;
  j["baseline_top1"] = r.baseline_top1;
  j["latency_scope"] = r.latency_scope;
  return j;
}

std::string to_csv(std::span<const BenchmarkReport> reports) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "mode,policy,tau,samples,top1_accuracy,accuracy_gain_vs_single,avg_inferences,avg_latency_ms,"
         "avg_fps,speedup_vs_seq,latency_source,median_latency_ms,p95_latency_ms,baseline_top1\n";
  for (const auto& r : reports) {
    out << to_string(r.mode) << ',' << r.policy << ',' << r.tau << ',' << r.samples << ',' << r.top1_accuracy
        << ',' << r.accuracy_gain_vs_single << ',' << r.avg_inferences << ',' << r.avg_latency_ms << ','
        << r.avg_fps << ',';
    if (r.speedup_vs_seq) out << *r.speedup_vs_seq;
    out << ',' << r.latency_source << ',' << r.median_latency_ms << ',' << r.p95_latency_ms << ','
        << r.baseline_top1 << '\n';
  }
  return out.str();
}

}  // namespace adaptta

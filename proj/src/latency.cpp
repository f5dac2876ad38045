#include "adaptta/latency.hpp"

#include <cmath>
#include <iterator>
#include <string>

#include "adaptta/errors.hpp"

namespace adaptta {

namespace {

void check_non_negative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ConfigError(std::string(what) + " must be a finite non-negative number");
  }
}

}  // namespace

LatencyModel::LatencyModel(double per_inference_ms, double per_crop_ms, double per_flip_ms)
    : LatencyModel(per_inference_ms, per_crop_ms, per_flip_ms,
                   {{5, kDefaultBatch5Factor * per_inference_ms}, {10, kDefaultBatch10Factor * per_inference_ms}}) {}

LatencyModel::LatencyModel(double per_inference_ms, double per_crop_ms, double per_flip_ms,
                           std::map<std::size_t, double> batch_curve)
    : per_inference_ms_(per_inference_ms),
      per_crop_ms_(per_crop_ms),
      per_flip_ms_(per_flip_ms),
      batch_curve_(std::move(batch_curve)) {
  check_non_negative(per_inference_ms_, "per-inference latency");
  if (per_inference_ms_ == 0.0) {
    throw ConfigError("per-inference latency must be positive");
  }
  check_non_negative(per_crop_ms_, "crop latency");
  check_non_negative(per_flip_ms_, "flip latency");
  if (batch_curve_.count(0) != 0) {
    throw ConfigError("batch curve cannot contain batch size 0");
  }
  const auto [it, inserted] = batch_curve_.emplace(1, per_inference_ms_);
  if (!inserted && it->second != per_inference_ms_) {
    throw ConfigError("batch curve entry for size 1 must equal the per-inference latency");
  }
  for (const auto& [size, ms] : batch_curve_) {
    check_non_negative(ms, ("batch latency @" + std::to_string(size)).c_str());
  }
}

LatencyModel LatencyModel::mobilenet_v1() {
  return LatencyModel(53.1, kDefaultCropMs, kDefaultFlipMs, {{5, 290.6}, {10, 569.9}});
}

LatencyModel LatencyModel::mobilenet_v2() {
  return LatencyModel(44.2, kDefaultCropMs, kDefaultFlipMs, {{5, 261.8}, {10, 513.5}});
}

double LatencyModel::batch_ms(std::size_t batch_size) const {
  if (batch_size == 0) return 0.0;
  const auto exact = batch_curve_.find(batch_size);
  if (exact != batch_curve_.end()) return exact->second;

  auto hi = batch_curve_.upper_bound(batch_size);
  if (hi == batch_curve_.end()) {
    // Extend the last segment; a one-point curve scales linearly.
    const auto last = std::prev(hi);
    if (last == batch_curve_.begin()) {
      return per_inference_ms_ * static_cast<double>(batch_size);
    }
    hi = last;
  }
  const auto lo = std::prev(hi);
  const double x0 = static_cast<double>(lo->first);
  const double x1 = static_cast<double>(hi->first);
  const double t = (static_cast<double>(batch_size) - x0) / (x1 - x0);
  return lo->second + t * (hi->second - lo->second);
}

LatencyModel LatencyModel::without_transform_costs() const {
  return LatencyModel(per_inference_ms_, 0.0, 0.0, batch_curve_);
}

}  // namespace adaptta

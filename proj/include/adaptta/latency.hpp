#pragma once

#include <cstddef>
#include <map>

namespace adaptta {

/// Parametric cost model used for simulated latency accounting.
///
/// batch_curve maps a batch size to the total time of one batched
/// inference. Sizes between two curve points are interpolated linearly;
/// sizes beyond the last point extend the last segment.
class LatencyModel {
 public:
  // Measured on an embedded Cortex-A53 class CPU.
  static constexpr double kDefaultCropMs = 0.8;
  static constexpr double kDefaultFlipMs = 0.9;
  // Batch-5 and batch-10 cost relative to a single inference.
  static constexpr double kDefaultBatch5Factor = 5.5;
  static constexpr double kDefaultBatch10Factor = 11.2;

  /// Builds the default batch curve {1: p, 5: 5.5p, 10: 11.2p}.
  explicit LatencyModel(double per_inference_ms, double per_crop_ms = kDefaultCropMs,
                        double per_flip_ms = kDefaultFlipMs);

  /// Explicit curve. Entry 1 is set to per_inference_ms when absent and
  /// must equal it when present. Throws ConfigError on negative values.
  LatencyModel(double per_inference_ms, double per_crop_ms, double per_flip_ms,
               std::map<std::size_t, double> batch_curve);

  /// MobileNetV1 / MobileNetV2 single and batched latencies on the
  /// Cortex-A53 board, plus the crop and flip costs.
  static LatencyModel mobilenet_v1();
  static LatencyModel mobilenet_v2();

  double per_inference_ms() const noexcept { return per_inference_ms_; }
  double per_crop_ms() const noexcept { return per_crop_ms_; }
  double per_flip_ms() const noexcept { return per_flip_ms_; }
  const std::map<std::size_t, double>& batch_curve() const noexcept { return batch_curve_; }

  /// Total time for one inference over `batch_size` inputs.
  double batch_ms(std::size_t batch_size) const;

  /// Same model with crop and flip charges set to zero.
  LatencyModel without_transform_costs() const;

 private:
  double per_inference_ms_;
  double per_crop_ms_;
  double per_flip_ms_;
  std::map<std::size_t, double> batch_curve_;
};

}  // namespace adaptta

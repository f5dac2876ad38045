#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "adaptta/backend.hpp"

namespace adaptta {

// Deterministic stand-in for a real image classifier. The view is average
// pooled onto a small grid, intensities are scaled to [0, 1], and a fixed
// seeded linear map (no bias) produces C logits followed by softmax. An
// all-zero view therefore yields exactly uniform probabilities.
//
// Weights are drawn from std::mt19937_64 and mapped to [-1, 1) by bit
// manipulation, so they are reproducible across standard libraries.
class ToyClassifier final : public Backend {
 public:
  static constexpr int kMaxGrid = 8;

  /// Throws ConfigError if num_classes < 2 or view_side < 1.
  ToyClassifier(std::uint64_t seed, std::size_t num_classes, int view_side);

  std::size_t num_classes() const noexcept override { return num_classes_; }
  bool consumes_pixels() const noexcept override { return true; }
  ProbVector predict(const ViewRef& view) const override;

  std::uint64_t seed() const noexcept { return seed_; }
  int view_side() const noexcept { return view_side_; }
  int grid() const noexcept { return grid_; }

  /// Pooled feature vector (grid * grid * 3 values in [0, 1]).
  std::vector<double> features(const Image& img) const;
  std::vector<double> logits(const Image& img) const;

 private:
  std::uint64_t seed_;
  std::size_t num_classes_;
  int view_side_;
  int grid_;
  std::vector<double> weights_;  // num_classes_ rows, row-major
};

/// Factory mirroring the free-function style used elsewhere.
inline ToyClassifier toy_classifier(std::uint64_t seed, std::size_t num_classes, int view_side) {
  return ToyClassifier(seed, num_classes, view_side);
}

}  // namespace adaptta

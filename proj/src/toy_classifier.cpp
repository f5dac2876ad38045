#include "adaptta/toy_classifier.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "adaptta/errors.hpp"

namespace adaptta {

namespace {

// Uniform in [-1, 1) from the top 53 bits of one engine draw.
double signed_unit(std::mt19937_64& gen) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

ToyClassifier::ToyClassifier(std::uint64_t seed, std::size_t num_classes, int view_side)
    : seed_(seed), num_classes_(num_classes), view_side_(view_side), grid_(std::min(kMaxGrid, view_side)) {
  if (num_classes < 2) {
    throw ConfigError("toy classifier needs at least 2 classes");
  }
  if (view_side < 1) {
    throw ConfigError("toy classifier view side must be positive");
  }
  const std::size_t features = static_cast<std::size_t>(grid_) * grid_ * Image::kChannels;
  weights_.resize(num_classes_ * features);
  std::mt19937_64 gen(seed);
  for (double& w : weights_) {
    w = signed_unit(gen);
  }
}

std::vector<double> ToyClassifier::features(const Image& img) const {
  if (img.width() != view_side_ || img.height() != view_side_) {
    throw GeometryError("toy classifier expects " + std::to_string(view_side_) + "x" +
                        std::to_string(view_side_) + " views, got " + std::to_string(img.width()) + "x" +
                        std::to_string(img.height()));
  }
  constexpr int kC = Image::kChannels;
  std::vector<double> sums(static_cast<std::size_t>(grid_) * grid_ * kC, 0.0);
  std::vector<double> counts(static_cast<std::size_t>(grid_) * grid_, 0.0);
  for (int y = 0; y < view_side_; ++y) {
    const int gy = y * grid_ / view_side_;
    for (int x = 0; x < view_side_; ++x) {
      const int gx = x * grid_ / view_side_;
      const std::size_t cell = static_cast<std::size_t>(gy) * grid_ + gx;
      counts[cell] += 1.0;
      for (int c = 0; c < kC; ++c) {
        sums[cell * kC + c] += img.at(x, y, c);
      }
    }
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    sums[i] /= counts[i / kC] * 255.0;
  }
  return sums;
}

std::vector<double> ToyClassifier::logits(const Image& img) const {
  const auto f = features(img);
  std::vector<double> out(num_classes_, 0.0);
  for (std::size_t k = 0; k < num_classes_; ++k) {
    const double* row = weights_.data() + k * f.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      acc += row[j] * f[j];
    }
    out[k] = acc;
  }
  return out;
}

ProbVector ToyClassifier::predict(const ViewRef& view) const {
  if (view.pixels == nullptr) {
    throw GeometryError("toy classifier needs pixels for view " + std::to_string(view.view_index));
  }
  return ProbVector(softmax(logits(*view.pixels)));
}

}  // namespace adaptta

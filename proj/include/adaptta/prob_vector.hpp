#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adaptta {

/// Class-probability vector: C >= 2 finite, non-negative entries summing to
/// one within kSumTolerance.
class ProbVector {
 public:
  static constexpr double kSumTolerance = 1e-6;

  /// Throws ProbabilityError if the invariant does not hold.
  explicit ProbVector(std::vector<double> probs);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const noexcept { return probs_[i]; }
  std::span<const double> values() const noexcept { return probs_; }
  const std::vector<double>& vector() const noexcept { return probs_; }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> probs_;
};

/// Numerically stable softmax over `logits`.
std::vector<double> softmax(std::span<const double> logits);

}  // namespace adaptta

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "adaptta/image.hpp"
#include "adaptta/prob_vector.hpp"

namespace adaptta {

/// What a backend is asked to classify: the identity of the view (used by
/// replay backends) and, for backends that look at pixels, the view itself.
struct ViewRef {
  std::string_view sample_id;
  std::size_t view_index = 0;
  const Image* pixels = nullptr;
};

/// Classifier producing one probability vector per view.
///
/// Implementations are immutable after construction: predict and
/// predict_batch are const and safe to call concurrently.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::size_t num_classes() const noexcept = 0;

  /// True when predict() needs ViewRef::pixels. Replay backends answer from
  /// (sample_id, view_index) alone, so the engine can skip materializing
  /// views for them.
  virtual bool consumes_pixels() const noexcept = 0;

  virtual ProbVector predict(const ViewRef& view) const = 0;

  /// Element i equals predict(views[i]). The first failing element aborts
  /// the batch.
  virtual std::vector<ProbVector> predict_batch(std::span<const ViewRef> views) const;
};

/// Convenience for pixel backends: classifies a single anonymous image.
ProbVector predict(const Backend& backend, const Image& img);
std::vector<ProbVector> predict_batch(const Backend& backend, std::span<const Image> imgs);

}  // namespace adaptta

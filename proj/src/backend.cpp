#include "adaptta/backend.hpp"

namespace adaptta {

std::vector<ProbVector> Backend::predict_batch(std::span<const ViewRef> views) const {
  std::vector<ProbVector> out;
  out.reserve(views.size());
  for (const auto& v : views) {
    out.push_back(predict(v));
  }
  return out;
}

ProbVector predict(const Backend& backend, const Image& img) {
  return backend.predict(ViewRef{{}, 0, &img});
}

std::vector<ProbVector> predict_batch(const Backend& backend, std::span<const Image> imgs) {
  std::vector<ViewRef> refs;
  refs.reserve(imgs.size());
  for (std::size_t i = 0; i < imgs.size(); ++i) {
    refs.push_back(ViewRef{{}, i, &imgs[i]});
  }
  return backend.predict_batch(refs);
}

}  // namespace adaptta

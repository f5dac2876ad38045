#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "adaptta/backend.hpp"

namespace adaptta {

struct TraceHeader {
  std::size_t classes = 0;
  std::string policy;
  std::size_t num_views = 0;
};

/// One precomputed prediction: the probabilities a model produced for view
/// `view_index` of sample `sample_id`.
struct TraceRecord {
  std::string sample_id;
  std::size_t view_index = 0;
  ProbVector probs;
  int true_label = 0;
};

/// Replays per-view probabilities recorded from some other model.
///
/// The (sample, view) grid is total: every declared sample has exactly one
/// row for each view 0..N-1. Lookups outside the grid throw
/// TraceError(kUnknownView).
class TraceBackend final : public Backend {
 public:
  struct SampleInfo {
    std::string id;
    int label;
  };

  /// Validates the header and records (duplicates, class count, probability
  /// invariant, label range, view coverage). Throws TraceError.
  TraceBackend(TraceHeader header, std::vector<TraceRecord> records);

  std::size_t num_classes() const noexcept override { return header_.classes; }
  bool consumes_pixels() const noexcept override { return false; }
  ProbVector predict(const ViewRef& view) const override;

  const TraceHeader& header() const noexcept { return header_; }
  std::size_t num_views() const noexcept { return header_.num_views; }
  /// Samples in first-appearance order.
  const std::vector<SampleInfo>& samples() const noexcept { return samples_; }
  const ProbVector& row(const std::string& sample_id, std::size_t view_index) const;

 private:
  TraceHeader header_;
  std::vector<SampleInfo> samples_;
  std::unordered_map<std::string, std::vector<ProbVector>> rows_;
};

/// JSON Lines: a header object {"classes", "policy", "num_views"} followed by
/// one {"sample", "view", "label", "probs"} object per line. Blank lines are
/// skipped.
TraceBackend parse_trace(std::istream& in);
TraceBackend load_trace(const std::filesystem::path& path);

/// Writes the header and records in the order given. Doubles are emitted in
/// shortest round-trip form, so a reload reproduces the values exactly.
void write_trace(std::ostream& out, const TraceHeader& header, const std::vector<TraceRecord>& records);

}  // namespace adaptta

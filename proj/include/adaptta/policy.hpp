#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "adaptta/transforms.hpp"

namespace adaptta {

/// Ordered set of views evaluated for each input. The number of views is
/// the policy's N; views are consumed front to back.
class TransformPolicy {
 public:
  static constexpr int kDefaultSourceSide = 256;
  static constexpr int kDefaultViewSide = 224;

  /// Validates the invariants: at least one view, every view inside a
  /// source_side square, and the 5C/10C structure when `name` is one of
  /// those reserved identifiers. Throws ConfigError otherwise.
  TransformPolicy(std::string name, std::vector<ViewSpec> views, int source_side, int view_side);

  const std::string& name() const noexcept { return name_; }
  const std::vector<ViewSpec>& views() const noexcept { return views_; }
  std::size_t size() const noexcept { return views_.size(); }
  int source_side() const noexcept { return source_side_; }
  int view_side() const noexcept { return view_side_; }

  friend bool operator==(const TransformPolicy&, const TransformPolicy&) = default;

 private:
  std::string name_;
  std::vector<ViewSpec> views_;
  int source_side_;
  int view_side_;
};

/// The five canonical crops: center, top-left, top-right, bottom-left,
/// bottom-right.
std::vector<ViewSpec> five_crops(int source_side, int view_side);

/// "5C" or "10C" over a 256 source with 224 views. Views come center first,
/// then the four corners, then (10C) the same five mirrored.
/// Throws ConfigError for any other name.
TransformPolicy make_policy(std::string_view name);
TransformPolicy make_policy(std::string_view name, int source_side, int view_side);

/// Single center view; the no-augmentation reference.
TransformPolicy center_only_policy(int source_side = TransformPolicy::kDefaultSourceSide,
                                   int view_side = TransformPolicy::kDefaultViewSide);

}  // namespace adaptta

#include "adaptta/policy.hpp"

#include <string>

#include "adaptta/errors.hpp"

namespace adaptta {

namespace {

void check_named_structure(const std::string& name, const std::vector<ViewSpec>& views) {
  if (name == "5C") {
    if (views.size() != 5) throw ConfigError("5C policy must have exactly 5 views");
    for (const auto& v : views) {
      if (v.hflip) throw ConfigError("5C policy views must not be mirrored");
    }
  } else if (name == "10C") {
    if (views.size() != 10) throw ConfigError("10C policy must have exactly 10 views");
    for (std::size_t i = 0; i < 5; ++i) {
      ViewSpec mirrored = views[i];
      mirrored.hflip = true;
      if (views[i].hflip || views[i + 5] != mirrored) {
        throw ConfigError("10C views 5..9 must be views 0..4 mirrored");
      }
    }
  }
}

}  // namespace

TransformPolicy::TransformPolicy(std::string name, std::vector<ViewSpec> views, int source_side, int view_side)
    : name_(std::move(name)), views_(std::move(views)), source_side_(source_side), view_side_(view_side) {
  if (views_.empty()) {
    throw ConfigError("policy '" + name_ + "' has no views");
  }
  if (source_side_ < 1 || view_side_ < 1) {
    throw ConfigError("policy sides must be positive");
  }
  for (std::size_t i = 0; i < views_.size(); ++i) {
    const auto& v = views_[i];
    if (!v.fits(source_side_, source_side_)) {
      throw ConfigError("view " + std::to_string(i) + " of policy '" + name_ + "' leaves the source");
    }
  }
  check_named_structure(name_, views_);
}

std::vector<ViewSpec> five_crops(int source_side, int view_side) {
  if (view_side > source_side) {
    throw ConfigError("view side " + std::to_string(view_side) + " exceeds source side " +
                      std::to_string(source_side));
  }
  const int far = source_side - view_side;
  const int mid = far / 2;
  return {
      {mid, mid, view_side, view_side, false},
      {0, 0, view_side, view_side, false},
      {far, 0, view_side, view_side, false},
      {0, far, view_side, view_side, false},
      {far, far, view_side, view_side, false},
  };
}

TransformPolicy make_policy(std::string_view name) {
  return make_policy(name, TransformPolicy::kDefaultSourceSide, TransformPolicy::kDefaultViewSide);
}

TransformPolicy make_policy(std::string_view name, int source_side, int view_side) {
  auto views = five_crops(source_side, view_side);
  if (name == "5C") {
    return TransformPolicy("5C", std::move(views), source_side, view_side);
  }
  if (name == "10C") {
    for (std::size_t i = 0; i < 5; ++i) {
      ViewSpec mirrored = views[i];
      mirrored.hflip = true;
      views.push_back(mirrored);
    }
    return TransformPolicy("10C", std::move(views), source_side, view_side);
  }
  throw ConfigError("unknown policy '" + std::string(name) + "' (expected 5C or 10C)");
}

TransformPolicy center_only_policy(int source_side, int view_side) {
  return TransformPolicy("center", {five_crops(source_side, view_side).front()}, source_side, view_side);
}

}  // namespace adaptta

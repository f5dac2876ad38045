#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adaptta {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration supplied by the caller (bad tau,
/// unknown policy name, empty sweep, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Geometry violations: crop rectangles outside the image, zero-sized
/// targets, images whose size does not match what a backend expects.
class GeometryError : public Error {
 public:
  using Error::Error;
};

enum class PpmErrc {
  kBadMagic,
  kMalformedHeader,
  kUnsupportedMaxval,
  kTruncatedPixels,
};

class PpmError : public Error {
 public:
  PpmError(PpmErrc code, const std::string& what) : Error(what), code_(code) {}
  PpmErrc code() const noexcept { return code_; }

 private:
  PpmErrc code_;
};

/// Probability vector failed validation (wrong length, negative or
/// non-finite entry, sum outside 1 +/- 1e-6).
class ProbabilityError : public Error {
 public:
  using Error::Error;
};

enum class TraceErrc {
  kSchema,
  kDuplicateView,
  kInconsistentClasses,
  kInvalidProbabilities,
  kIncompleteCoverage,
  kUnknownView,
};

class TraceError : public Error {
 public:
  TraceError(TraceErrc code, const std::string& what) : Error(what), code_(code) {}
  TraceErrc code() const noexcept { return code_; }

 private:
  TraceErrc code_;
};

/// A backend failure raised while evaluating one view of a policy.
class ViewError : public Error {
 public:
  ViewError(std::size_t view_index, const std::string& what)
      : Error("view " + std::to_string(view_index) + ": " + what), view_index_(view_index) {}
  std::size_t view_index() const noexcept { return view_index_; }

 private:
  std::size_t view_index_;
};

/// File-system or dataset problems: unreadable files, manifest syntax,
/// labels out of range, coverage mismatch between manifest and backend.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace adaptta

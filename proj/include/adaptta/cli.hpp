#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "adaptta/harness.hpp"

namespace adaptta::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInputData = 2,
  kInternal = 3,
};

/// Parses "wall" or "sim[:key=value,...]". Keys: per-inference, crop, flip,
/// batch<N> (total ms for a batch of N), plus the bare presets
/// mobilenet-v1 / mobilenet-v2. Throws ConfigError.
LatencySource parse_latency(std::string_view text);

/// Entry point behind the adaptta binary. Reports go to `out` (or --out),
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adaptta::cli

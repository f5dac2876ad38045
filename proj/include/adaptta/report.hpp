#pragma once

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "adaptta/harness.hpp"

namespace adaptta {

/// JSON object with the BenchmarkReport field names. speedup_vs_seq is null
/// when unknown.
nlohmann::ordered_json to_json(const BenchmarkReport& report);

/// Header line plus one row per report.
std::string to_csv(std::span<const BenchmarkReport> reports);

}  // namespace adaptta

#include "adaptta/trace.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "adaptta/errors.hpp"

namespace adaptta {

namespace {

using nlohmann::json;

std::size_t expected_views(const std::string& policy) {
  if (policy == "5C") return 5;
  if (policy == "10C") return 10;
  return 0;
}

void validate_header(const TraceHeader& h) {
  if (h.classes < 2) {
    throw TraceError(TraceErrc::kSchema, "trace header: classes must be >= 2");
  }
  if (h.num_views < 1) {
    throw TraceError(TraceErrc::kSchema, "trace header: num_views must be >= 1");
  }
  if (h.policy.empty()) {
    throw TraceError(TraceErrc::kSchema, "trace header: policy is empty");
  }
  const auto n = expected_views(h.policy);
  if (n != 0 && n != h.num_views) {
    throw TraceError(TraceErrc::kSchema, "trace header: policy " + h.policy + " has " + std::to_string(n) +
                                             " views, header declares " + std::to_string(h.num_views));
  }
}

const json& require(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw TraceError(TraceErrc::kSchema, "line " + std::to_string(line) + ": missing field '" + key + "'");
  }
  return *it;
}

std::size_t require_count(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw TraceError(TraceErrc::kSchema,
                     "line " + std::to_string(line) + ": field '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

TraceBackend::TraceBackend(TraceHeader header, std::vector<TraceRecord> records) : header_(std::move(header)) {
  validate_header(header_);
  std::unordered_map<std::string, std::vector<std::optional<ProbVector>>> grid;
  std::unordered_map<std::string, int> labels;
  for (auto& r : records) {
    if (r.probs.size() != header_.classes) {
      throw TraceError(TraceErrc::kInconsistentClasses, "sample " + r.sample_id + " view " +
                                                            std::to_string(r.view_index) + " has " +
                                                            std::to_string(r.probs.size()) + " classes, header says " +
                                                            std::to_string(header_.classes));
    }
    if (r.view_index >= header_.num_views) {
      throw TraceError(TraceErrc::kSchema, "sample " + r.sample_id + ": view " + std::to_string(r.view_index) +
                                               " outside 0.." + std::to_string(header_.num_views - 1));
    }
    if (r.true_label < 0 || static_cast<std::size_t>(r.true_label) >= header_.classes) {
      throw TraceError(TraceErrc::kSchema, "sample " + r.sample_id + ": label " + std::to_string(r.true_label) +
                                               " out of range");
    }
    auto [slot, inserted] = grid.try_emplace(r.sample_id, header_.num_views);
    if (inserted) {
      samples_.push_back({r.sample_id, r.true_label});
      labels.emplace(r.sample_id, r.true_label);
    } else if (labels.at(r.sample_id) != r.true_label) {
      throw TraceError(TraceErrc::kSchema, "sample " + r.sample_id + " has conflicting labels");
    }
    auto& cell = slot->second[r.view_index];
    if (cell.has_value()) {
      throw TraceError(TraceErrc::kDuplicateView,
                       "duplicate row for sample " + r.sample_id + " view " + std::to_string(r.view_index));
    }
    cell = std::move(r.probs);
  }
  for (const auto& s : samples_) {
    auto& cells = grid.at(s.id);
    std::vector<ProbVector> rows;
    rows.reserve(cells.size());
    for (std::size_t v = 0; v < cells.size(); ++v) {
      if (!cells[v].has_value()) {
        throw TraceError(TraceErrc::kIncompleteCoverage,
                         "sample " + s.id + " is missing view " + std::to_string(v));
      }
      rows.push_back(std::move(*cells[v]));
    }
    rows_.emplace(s.id, std::move(rows));
  }
}

const ProbVector& TraceBackend::row(const std::string& sample_id, std::size_t view_index) const {
  const auto it = rows_.find(sample_id);
  if (it == rows_.end()) {
    throw TraceError(TraceErrc::kUnknownView, "unknown sample '" + sample_id + "'");
  }
  if (view_index >= it->second.size()) {
    throw TraceError(TraceErrc::kUnknownView,
                     "sample '" + sample_id + "' has no view " + std::to_string(view_index));
  }
  return it->second[view_index];
}

ProbVector TraceBackend::predict(const ViewRef& view) const {
  return row(std::string(view.sample_id), view.view_index);
}

TraceBackend parse_trace(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<TraceHeader> header;
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw TraceError(TraceErrc::kSchema, "line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw TraceError(TraceErrc::kSchema, "line " + std::to_string(line_no) + ": expected a JSON object");
    }
    if (!header) {
      TraceHeader h;
      h.classes = require_count(obj, "classes", line_no);
      h.num_views = require_count(obj, "num_views", line_no);
      const json& policy = require(obj, "policy", line_no);
      if (!policy.is_string()) {
        throw TraceError(TraceErrc::kSchema, "line " + std::to_string(line_no) + ": policy must be a string");
      }
      h.policy = policy.get<std::string>();
      validate_header(h);
      header = std::move(h);
      continue;
    }
    const json& sample = require(obj, "sample", line_no);
    if (!sample.is_string()) {
      throw TraceError(TraceErrc::kSchema, "line " + std::to_string(line_no) + ": sample must be a string");
    }
    const std::size_t view = require_count(obj, "view", line_no);
    const json& label = require(obj, "label", line_no);
    if (!label.is_number_integer()) {
      throw TraceError(TraceErrc::kSchema, "line " + std::to_string(line_no) + ": label must be an integer");
    }
    const json& probs = require(obj, "probs", line_no);
    if (!probs.is_array()) {
      throw TraceError(TraceErrc::kSchema, "line " + std::to_string(line_no) + ": probs must be an array");
    }
    std::vector<double> values;
    values.reserve(probs.size());
    for (const auto& p : probs) {
      if (!p.is_number()) {
        throw TraceError(TraceErrc::kSchema, "line " + std::to_string(line_no) + ": probs must be numbers");
      }
      values.push_back(p.get<double>());
    }
    if (values.size() != header->classes) {
      throw TraceError(TraceErrc::kInconsistentClasses, "line " + std::to_string(line_no) + ": " +
                                                            std::to_string(values.size()) + " probabilities, expected " +
                                                            std::to_string(header->classes));
    }
    try {
      records.push_back(TraceRecord{sample.get<std::string>(), view, ProbVector(std::move(values)),
                                    label.get<int>()});
    } catch (const ProbabilityError& e) {
      throw TraceError(TraceErrc::kInvalidProbabilities,
                       "line " + std::to_string(line_no) + ": invalid probability row: " + e.what());
    }
  }
  if (!header) {
    throw TraceError(TraceErrc::kSchema, "trace is empty: missing header line");
  }
  return TraceBackend(std::move(*header), std::move(records));
}

TraceBackend load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open trace " + path.string());
  }
  return parse_trace(in);
}

void write_trace(std::ostream& out, const TraceHeader& header, const std::vector<TraceRecord>& records) {
  // Keys in documented order.
  nlohmann::ordered_json head;
  head["classes"] = header.classes;
  head["policy"] = header.policy;
  head["num_views"] = header.num_views;
  out << head.dump() << '\n';
  for (const auto& r : records) {
    nlohmann::ordered_json row;
    row["sample"] = r.sample_id;
    row["view"] = r.view_index;
    row["label"] = r.true_label;
    row["probs"] = r.probs.vector();
    out << row.dump() << '\n';
  }
}

}  // namespace adaptta

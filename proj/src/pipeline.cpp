//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/pipeline.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "biomol/molgraph.hpp"
#include "biomol/protseq.hpp"
#include "biomol/selfies.hpp"
#include "biomol/tensor.hpp"

namespace biomol {

using nlohmann::json;

PayloadKind payload_kind_from(std::string_view name) {
  if (name == "text") return PayloadKind::kText;
  if (name == "selfies") return PayloadKind::kSelfies;
  if (name == "fasta") return PayloadKind::kFasta;
  throw Error(ErrorKind::kParseError,
              "unknown payload kind '" + std::string(name) + "'");
}

const char* payload_kind_name(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::kText:
      return "text";
    case PayloadKind::kSelfies:
      return "selfies";
    case PayloadKind::kFasta:
      return "fasta";
  }
  return "?";
}

namespace {

void validate_payload(PayloadKind kind, const std::string& payload,
                      std::size_t record_index, const char* field) {
  try {
    switch (kind) {
      case PayloadKind::kText:
        return;
      case PayloadKind::kSelfies: {
        MolecularGraph g = decode_selfies(parse_selfies(payload));
        if (!check_valence(g).valid()) {
          throw Error(ErrorKind::kValidationError, "valence violation");
        }
        return;
      }
      case PayloadKind::kFasta:
        if (!validate_protein(payload)) {
          throw Error(ErrorKind::kInvalidResidue, payload);
        }
        return;
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::kValidationError,
                "record " + std::to_string(record_index) + " " + field +
                    ": " + e.what(),
                record_index);
  }
}

}  // namespace

std::string InstructionRecord::direction_tag() const {
  return std::string(payload_kind_name(input_kind)) + "->" +
         payload_kind_name(output_kind);
}

std::optional<std::pair<PayloadKind, PayloadKind>> task_direction(
    std::string_view task_id) {
  using K = PayloadKind;
  static const std::vector<std::pair<std::string_view,
                                     std::pair<PayloadKind, PayloadKind>>>
      table = {
          {"PubChem-iupac", {K::kSelfies, K::kText}},
          {"PubChem-molgen", {K::kText, K::kSelfies}},
          {"ChEBI-caption", {K::kSelfies, K::kText}},
          {"ChEBI-molgen", {K::kText, K::kSelfies}},
          {"TrEMBL-name", {K::kFasta, K::kText}},
          {"TrEMBL-family", {K::kFasta, K::kText}},
          {"TrEMBL-location", {K::kFasta, K::kText}},
          {"TrEMBL-function", {K::kFasta, K::kText}},
          {"TrEMBL-protgen", {K::kText, K::kFasta}},
          {"SwissProt-name", {K::kFasta, K::kText}},
          {"SwissProt-family", {K::kFasta, K::kText}},
          {"SwissProt-location", {K::kFasta, K::kText}},
          {"SwissProt-function", {K::kFasta, K::kText}},
          {"SwissProt-protgen", {K::kText, K::kFasta}},
          {"BindingDB-drug", {K::kFasta, K::kSelfies}},
          {"Rhea-enzyme", {K::kSelfies, K::kFasta}},
      };
  for (const auto& [name, direction] : table) {
    if (name == task_id) return direction;
  }
  return std::nullopt;
}

std::vector<InstructionRecord> load_records(std::string_view jsonl,
                                            std::string_view task_id) {
  std::vector<InstructionRecord> records;
  std::istringstream stream{std::string(jsonl)};
  std::string line;
  std::size_t index = 0;
  while (std::getline(stream, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json parsed = json::parse(line, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      throw Error(ErrorKind::kParseError,
                  "record " + std::to_string(index) + ": malformed JSON",
                  index);
    }
    InstructionRecord record;
    try {
      record.task_id = parsed.at("task_id").get<std::string>();
      record.instruction = parsed.at("instruction").get<std::string>();
      record.input_kind =
          payload_kind_from(parsed.at("input_kind").get<std::string>());
      record.input = parsed.at("input").get<std::string>();
      record.output_kind =
          payload_kind_from(parsed.at("output_kind").get<std::string>());
      record.output = parsed.at("output").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParseError,
                  "record " + std::to_string(index) + ": " + e.what(), index);
    }
    if (!task_id.empty() && record.task_id != task_id) {
      throw Error(ErrorKind::kValidationError,
                  "record " + std::to_string(index) + ": task_id '" +
                      record.task_id + "' does not match '" +
                      std::string(task_id) + "'",
                  index);
    }
    if (auto direction = task_direction(record.task_id)) {
      if (record.input_kind != direction->first ||
          record.output_kind != direction->second) {
        throw Error(ErrorKind::kValidationError,
                    "record " + std::to_string(index) + ": " +
                        record.task_id + " expects " +
                        payload_kind_name(direction->first) + "->" +
                        payload_kind_name(direction->second) + ", got " +
                        record.direction_tag(),
                    index);
      }
    }
    validate_payload(record.input_kind, record.input, index, "input");
    validate_payload(record.output_kind, record.output, index, "output");
    records.push_back(std::move(record));
    ++index;
  }
  return records;
}

std::string write_records(const std::vector<InstructionRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    json j = {{"task_id", record.task_id},
              {"instruction", record.instruction},
              {"input_kind", payload_kind_name(record.input_kind)},
              {"input", record.input},
              {"output_kind", payload_kind_name(record.output_kind)},
              {"output", record.output}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string SamplingPlan::to_json() const {
  json entries_json = json::array();
  for (const auto& entry : entries) {
    entries_json.push_back({{"task_id", entry.task_id},
                            {"ratio", entry.raw_ratio},
                            {"weight", entry.weight}});
  }
  json j = {{"stage", stage}, {"entries", entries_json}};
  return j.dump(2);
}

SamplingPlan SamplingPlan::from_json(std::string_view text) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error(ErrorKind::kParseError, "malformed plan JSON");
  }
  SamplingPlan plan;
  try {
    plan.stage = parsed.at("stage").get<int>();
    for (const auto& entry : parsed.at("entries")) {
      plan.entries.push_back({entry.at("task_id").get<std::string>(),
                              entry.at("ratio").get<double>(),
                              entry.at("weight").get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  return plan;
}

SamplingPlan build_plan(
    int stage, const std::vector<std::pair<std::string, double>>& table) {
  double sum = 0.0;
  for (const auto& [task, ratio] : table) {
    if (ratio < 0.0) {
      throw Error(ErrorKind::kValidationError,
                  task + ": negative sampling ratio");
    }
    sum += ratio;
  }
  if (sum <= 0.0) {
    throw Error(ErrorKind::kAllZero, "every sampling ratio is zero");
  }
  SamplingPlan plan;
  plan.stage = stage;
  for (const auto& [task, ratio] : table) {
    plan.entries.push_back({task, ratio, ratio / sum});
  }
  return plan;
}

std::vector<std::pair<std::string, double>> stage_ratio_table(int stage) {
  if (stage == 1) {
    return {
        {"PubChem-iupac", 0.1},      {"PubChem-molgen", 0.1},
        {"ChEBI-caption", 0.001},    {"ChEBI-molgen", 0.001},
        {"TrEMBL-name", 0.05},       {"TrEMBL-family", 0.05},
        {"TrEMBL-location", 0.05},   {"TrEMBL-function", 0.05},
        {"TrEMBL-protgen", 0.1},     {"SwissProt-name", 0.05},
        {"SwissProt-family", 0.05},  {"SwissProt-location", 0.05},
        {"SwissProt-function", 0.05},{"SwissProt-protgen", 0.1},
        {"BindingDB-drug", 0.05},    {"Rhea-enzyme", 0.05},
    };
  }
  if (stage == 2) {
    return {
        {"ChEBI-caption", 0.1},      {"ChEBI-molgen", 0.1},
        {"SwissProt-name", 0.1},     {"SwissProt-family", 0.1},
        {"SwissProt-location", 0.1}, {"SwissProt-function", 0.1},
        {"SwissProt-protgen", 0.2},  {"BindingDB-drug", 0.1},
        {"Rhea-enzyme", 0.1},
    };
  }
  throw Error(ErrorKind::kValidationError,
              "stage must be 1 or 2, got " + std::to_string(stage));
}

std::vector<std::string> sample_stream(const SamplingPlan& plan,
                                       std::uint64_t seed, std::size_t n) {
  if (plan.entries.empty()) {
    throw Error(ErrorKind::kAllZero, "plan has no entries");
  }
  std::vector<double> cumulative;
  cumulative.reserve(plan.entries.size());
  double acc = 0.0;
  for (const auto& entry : plan.entries) {
    acc += entry.weight;
    cumulative.push_back(acc);
  }
  SplitMix64 rng(seed);
  std::vector<std::string> stream;
  stream.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.next_double() * acc;
    std::size_t pick = cumulative.size() - 1;
    for (std::size_t k = 0; k < cumulative.size(); ++k) {
      if (u < cumulative[k]) {
        pick = k;
        break;
      }
    }
    stream.push_back(plan.entries[pick].task_id);
  }
  return stream;
}

}  // namespace biomol

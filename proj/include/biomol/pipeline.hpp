//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_PIPELINE_HPP_
#define BIOMOL_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biomol/errors.hpp"

namespace biomol {

enum class PayloadKind : std::uint8_t { kText, kSelfies, kFasta };

PayloadKind payload_kind_from(std::string_view name);  // throws ParseError
const char* payload_kind_name(PayloadKind kind);

struct InstructionRecord {
  std::string task_id;
  std::string instruction;
  PayloadKind input_kind;
  std::string input;
  PayloadKind output_kind;
  std::string output;

  // e.g. "selfies->text"
  std::string direction_tag() const;
};

// The declared (input, output) payload kinds for a built-in task id;
// std::nullopt for unknown tasks.
std::optional<std::pair<PayloadKind, PayloadKind>> task_direction(
    std::string_view task_id);

// JSON Lines reader for fields {task_id, instruction, input_kind, input,
// output_kind, output}. Biomolecule payloads are validated (SELFIES must
// parse and decode cleanly, FASTA payloads must be canonical residues);
// failures throw ValidationError with the record index, malformed JSON
// throws ParseError. When task_id is non-empty, records must match it.
std::vector<InstructionRecord> load_records(std::string_view jsonl,
                                            std::string_view task_id = {});

std::string write_records(const std::vector<InstructionRecord>& records);

struct PlanEntry {
  std::string task_id;
  double raw_ratio;
  double weight;  // normalized
};

struct SamplingPlan {
  int stage = 1;
  std::vector<PlanEntry> entries;

  std::string to_json() const;
  static SamplingPlan from_json(std::string_view text);  // throws ParseError
};

// Normalizes nonnegative ratios to weights summing to 1. Throws AllZero
// when no ratio is positive, ValidationError on negative ratios.
SamplingPlan build_plan(int stage,
                        const std::vector<std::pair<std::string, double>>& table);

// The instruction-tuning sampling ratio tables. Stage 2 keeps only the
// curated sub-datasets; its raw ratios already sum to 1.
std::vector<std::pair<std::string, double>> stage_ratio_table(int stage);

// n categorical draws from the plan weights using SplitMix64(seed);
// identical (plan, seed, n) yield identical sequences.
std::vector<std::string> sample_stream(const SamplingPlan& plan,
                                       std::uint64_t seed, std::size_t n);

}  // namespace biomol

#endif  // BIOMOL_PIPELINE_HPP_

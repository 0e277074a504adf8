//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/elements.hpp"

#include <algorithm>
#include <deque>
#include <mutex>

#include "biomol/errors.hpp"

namespace biomol {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kUnbalancedBracket: return "UnbalancedBracket";
    case ErrorKind::kCharacterOutsideBracket: return "CharacterOutsideBracket";
    case ErrorKind::kUnknownToken: return "UnknownToken";
    case ErrorKind::kSyntaxError: return "SyntaxError";
    case ErrorKind::kUnclosedRing: return "UnclosedRing";
    case ErrorKind::kUnclosedBranch: return "UnclosedBranch";
    case ErrorKind::kUnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::kUnsupportedElement: return "UnsupportedElement";
    case ErrorKind::kInvalidResidue: return "InvalidResidue";
    case ErrorKind::kEmptyRecord: return "EmptyRecord";
    case ErrorKind::kOutOfVocabulary: return "OutOfVocabulary";
    case ErrorKind::kUnknownId: return "UnknownId";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNonFiniteWeights: return "NonFiniteWeights";
    case ErrorKind::kMissingCoordinates: return "MissingCoordinates";
    case ErrorKind::kEmptyGraph: return "EmptyGraph";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kMissingField: return "MissingField";
    case ErrorKind::kAllZero: return "AllZero";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kValidationError: return "ValidationError";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Error";
}

namespace {

std::mutex g_extension_mutex;
// deque: stable references across registrations
std::deque<ElementInfo>* g_extensions() {
  static std::deque<ElementInfo> exts;
  return &exts;
}

// Periodic group 13/14/15+ decides how formal charge shifts the allowed
// valences.
enum class GroupKind { kGroup13, kGroup14, kGroup15Plus };

GroupKind group_of(std::string_view element) {
  if (element == "B") return GroupKind::kGroup13;
  if (element == "C" || element == "Si") return GroupKind::kGroup14;
  return GroupKind::kGroup15Plus;
}

}  // namespace

ElementTable::ElementTable() {
  entries_ = {
      {"B", {3}, true, false},
      {"C", {4}, true, false},
      {"N", {3, 5}, true, false},
      {"O", {2}, true, false},
      {"P", {3, 5}, true, false},
      {"S", {2, 4, 6}, true, false},
      {"F", {1}, true, true},
      {"Cl", {1}, true, true},
      {"Br", {1}, true, true},
      {"I", {1}, true, true},
      {"Se", {2, 4, 6}, false, false},
      {"Si", {4}, false, false},
  };
}

const ElementTable& ElementTable::instance() {
  static ElementTable table;
  return table;
}

// Extensions are consulted live so registration can happen any time
// before the symbol is first parsed. Extension entries are append-only;
// their indices start right after the core table.
const ElementInfo* ElementTable::find(std::string_view symbol) const {
  for (const auto& e : entries_) {
    if (e.symbol == symbol) return &e;
  }
  std::lock_guard<std::mutex> lock(g_extension_mutex);
  for (const auto& e : *g_extensions()) {
    if (e.symbol == symbol) return &e;
  }
  return nullptr;
}

std::optional<int> ElementTable::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].symbol == symbol) return static_cast<int>(i);
  }
  std::lock_guard<std::mutex> lock(g_extension_mutex);
  const auto* exts = g_extensions();
  for (std::size_t i = 0; i < exts->size(); ++i) {
    if ((*exts)[i].symbol == symbol) {
      return static_cast<int>(entries_.size() + i);
    }
  }
  return std::nullopt;
}

const ElementInfo& ElementTable::at(int index) const {
  if (index < static_cast<int>(entries_.size())) return entries_[index];
  std::lock_guard<std::mutex> lock(g_extension_mutex);
  return (*g_extensions())[index - entries_.size()];
}

void ElementTable::register_extension(const ElementInfo& info) {
  std::lock_guard<std::mutex> lock(g_extension_mutex);
  auto* exts = g_extensions();
  for (const auto& e : *exts) {
    if (e.symbol == info.symbol) return;
  }
  exts->push_back(info);
}

std::vector<int> allowed_valences(std::string_view element, int charge) {
  const ElementInfo* info = ElementTable::instance().find(element);
  if (info == nullptr) {
    throw Error(ErrorKind::kUnsupportedElement, std::string(element));
  }
  if (charge == 0) return info->valences;

  int shift = 0;
  switch (group_of(element)) {
    case GroupKind::kGroup13:
      shift = -charge;
      break;
    case GroupKind::kGroup14:
      shift = -std::abs(charge);
      break;
    case GroupKind::kGroup15Plus:
      shift = charge;
      break;
  }
  std::vector<int> adjusted;
  for (int v : info->valences) {
    if (v + shift >= 0) adjusted.push_back(v + shift);
  }
  if (adjusted.empty()) adjusted.push_back(0);
  return adjusted;
}

int bond_capacity(std::string_view element, int charge) {
  const auto valences = allowed_valences(element, charge);
  return *std::max_element(valences.begin(), valences.end());
}

std::optional<int> fill_target(std::string_view element, int charge,
                               int bond_order_sum) {
  for (int v : allowed_valences(element, charge)) {
    if (v >= bond_order_sum) return v;
  }
  return std::nullopt;
}

}  // namespace biomol

//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/vocab.hpp"

#include <sstream>

namespace biomol {

namespace {

TokenClass classify_token(std::string_view token) {
  for (const char* special : kSpecialTokens) {
    if (token == special) return TokenClass::kSpecial;
  }
  if (token.size() == 4 && token.starts_with("<p>")) {
    return TokenClass::kProtein;
  }
  return TokenClass::kMolecule;
}

}  // namespace

TokenId Vocabulary::append(std::string token, TokenClass cls) {
  TokenId id = static_cast<TokenId>(tokens_.size());
  index_.emplace(token, id);
  tokens_.push_back(std::move(token));
  classes_.push_back(cls);
  return id;
}

Vocabulary Vocabulary::default_vocabulary() {
  Vocabulary v;
  for (const char* token : kSpecialTokens) {
    v.append(token, TokenClass::kSpecial);
  }
  for (char residue : kResidueAlphabet) {
    v.append(std::string("<p>") + residue, TokenClass::kProtein);
  }
  // Structural SELFIES symbols.
  for (const char* prefix : {"", "=", "#"}) {
    for (const char* kind : {"Branch", "Ring"}) {
      for (int level = 1; level <= 3; ++level) {
        v.append(std::string("[") + prefix + kind + std::to_string(level) +
                     "]",
                 TokenClass::kMolecule);
      }
    }
  }
  // Atom symbols over the core table: bond prefixes none/=/#, charges
  // -1, 0, +1. Prefix order must not exceed the capacity of the neutral
  // element so every generated token is derivable.
  const ElementTable& table = ElementTable::instance();
  for (int e = 0; e < ElementTable::core_size(); ++e) {
    const ElementInfo& info = table.at(e);
    for (int charge : {0, 1, -1}) {
      int cap = bond_capacity(info.symbol, charge);
      for (int order = 1; order <= 3; ++order) {
        if (order > cap && order > 1) continue;
        std::string body = order == 2 ? "=" : order == 3 ? "#" : "";
        body += info.symbol;
        if (charge != 0) body += charge > 0 ? "+1" : "-1";
        v.append("[" + body + "]", TokenClass::kMolecule);
      }
    }
  }
  return v;
}

Vocabulary Vocabulary::load(std::string_view text) {
  Vocabulary v;
  std::istringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      throw Error(ErrorKind::kParseError,
                  "vocabulary files cannot contain blank lines");
    }
    if (v.index_.count(line) > 0) {
      throw Error(ErrorKind::kParseError, "duplicate token " + line);
    }
    v.append(line, classify_token(line));
  }
  return v;
}

std::string Vocabulary::save() const {
  std::string out;
  for (const auto& token : tokens_) {
    out += token;
    out += '\n';
  }
  return out;
}

std::optional<TokenId> Vocabulary::id_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token_of(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw Error(ErrorKind::kUnknownId, "id " + std::to_string(id));
  }
  return tokens_[id];
}

TokenClass Vocabulary::class_of(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw Error(ErrorKind::kUnknownId, "id " + std::to_string(id));
  }
  return classes_[id];
}

TokenId Vocabulary::add_molecule_token(std::string_view token) {
  if (token.size() < 3 || token.front() != '[' || token.back() != ']') {
    throw Error(ErrorKind::kValidationError,
                "molecule tokens are bracket groups");
  }
  if (auto existing = id_of(token)) return *existing;
  return append(std::string(token), TokenClass::kMolecule);
}

std::vector<TokenId> Vocabulary::tokenize_molecule(const SelfiesString& s,
                                                   bool extend) {
  std::vector<TokenId> ids;
  ids.reserve(s.tokens.size());
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    auto id = id_of(s.tokens[i]);
    if (!id.has_value()) {
      if (!extend) {
        throw Error(ErrorKind::kOutOfVocabulary, s.tokens[i], i);
      }
      id = add_molecule_token(s.tokens[i]);
    }
    ids.push_back(*id);
  }
  return ids;
}

std::vector<TokenId> Vocabulary::tokenize_molecule(
    const SelfiesString& s) const {
  std::vector<TokenId> ids;
  ids.reserve(s.tokens.size());
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    auto id = id_of(s.tokens[i]);
    if (!id.has_value()) {
      throw Error(ErrorKind::kOutOfVocabulary, s.tokens[i], i);
    }
    ids.push_back(*id);
  }
  return ids;
}

std::vector<TokenId> Vocabulary::tokenize_protein(
    const ProteinSequence& p) const {
  std::vector<TokenId> ids;
  ids.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto id = id_of(std::string("<p>") + p[i]);
    if (!id.has_value()) {
      throw Error(ErrorKind::kOutOfVocabulary,
                  std::string("<p>") + p[i], i);
    }
    ids.push_back(*id);
  }
  return ids;
}

std::string Vocabulary::detokenize(const std::vector<TokenId>& ids) const {
  std::string out;
  for (TokenId id : ids) {
    const std::string& token = token_of(id);
    if (class_of(id) == TokenClass::kProtein) {
      out += token.substr(3);
    } else {
      out += token;
    }
  }
  return out;
}

namespace {

const char* segment_kind_name(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::kSpecial:
      return "special";
    case SegmentKind::kMoleculeToken:
      return "molecule-token";
    case SegmentKind::kProteinToken:
      return "protein-token";
    case SegmentKind::kFeatureSlot:
      return "feature-slot";
  }
  return "?";
}

}  // namespace

std::string FormedInput::to_jsonl() const {
  std::string out;
  for (const Segment& segment : segments) {
    out += "{\"kind\":\"";
    out += segment_kind_name(segment.kind);
    out += "\",\"payload\":";
    if (segment.kind == SegmentKind::kFeatureSlot) {
      out += std::to_string(segment.slot_size);
    } else {
      out += "\"";
      out += segment.payload;  // tokens never need escaping
      out += "\"";
    }
    out += "}\n";
  }
  return out;
}

FormedInput form_input(EntityKind kind, const std::vector<std::string>& tokens,
                       bool include_features, int n_q) {
  if (include_features && n_q < 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "n_q must be at least 1 when features are included");
  }
  const bool mol = kind == EntityKind::kMolecule;
  const SegmentKind token_kind =
      mol ? SegmentKind::kMoleculeToken : SegmentKind::kProteinToken;
  FormedInput input;
  if (include_features) {
    input.segments.push_back(
        {SegmentKind::kSpecial, mol ? "<MOL>" : "<PROT>", 0});
    input.segments.push_back({SegmentKind::kFeatureSlot, "", 1 + n_q});
    input.segments.push_back(
        {SegmentKind::kSpecial, mol ? "</MOL>" : "</PROT>", 0});
  }
  input.segments.push_back(
      {SegmentKind::kSpecial, mol ? "<SELFIES>" : "<FASTA>", 0});
  for (const auto& token : tokens) {
    input.segments.push_back({token_kind, token, 0});
  }
  input.segments.push_back(
      {SegmentKind::kSpecial, mol ? "</SELFIES>" : "</FASTA>", 0});
  return input;
}

}  // namespace biomol

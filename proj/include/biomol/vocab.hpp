//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_VOCAB_HPP_
#define BIOMOL_VOCAB_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "biomol/protseq.hpp"
#include "biomol/selfies.hpp"

namespace biomol {

using TokenId = std::int32_t;

enum class TokenClass : std::uint8_t {
  kSpecial,
  kMolecule,  // bracketed SELFIES symbol
  kProtein,   // "<p>" + residue
};

// Modality markers in a fixed order; ids are stable across builds.
inline constexpr const char* kSpecialTokens[] = {
    "<SELFIES>", "</SELFIES>", "<FASTA>", "</FASTA>",
    "<MOL>",     "</MOL>",     "<PROT>",  "</PROT>",
};

// Expanded biomolecular vocabulary: special tokens, one "<p>X" token per
// canonical residue, and the SELFIES molecule alphabet. Token ids equal
// line numbers of the persisted file (0-based).
class Vocabulary {
 public:
  // Specials, protein tokens, then a systematically generated SELFIES
  // alphabet (structural symbols, then atom symbols over the core element
  // table with bond prefixes and charges -1..+1).
  static Vocabulary default_vocabulary();

  // One token per line; ids are line indices.
  static Vocabulary load(std::string_view text);
  std::string save() const;

  // Id lookup; std::nullopt when absent.
  std::optional<TokenId> id_of(std::string_view token) const;
  const std::string& token_of(TokenId id) const;  // throws UnknownId
  TokenClass class_of(TokenId id) const;          // throws UnknownId
  std::size_t size() const { return tokens_.size(); }

  // Appends a molecule token (used by extend-mode tokenization). The
  // token must be a well-formed bracket group not already present.
  TokenId add_molecule_token(std::string_view token);

  // One id per SELFIES bracket token. Unknown tokens throw
  // OutOfVocabulary (position = token index) unless extend is set.
  std::vector<TokenId> tokenize_molecule(const SelfiesString& s,
                                         bool extend = false);
  std::vector<TokenId> tokenize_molecule(const SelfiesString& s) const;

  // One id per residue through the "<p>" prefix table.
  std::vector<TokenId> tokenize_protein(const ProteinSequence& p) const;

  // Exact token concatenation; protein tokens have their "<p>" prefix
  // stripped so FASTA comes back as residues. Throws UnknownId.
  std::string detokenize(const std::vector<TokenId>& ids) const;

 private:
  Vocabulary() = default;
  TokenId append(std::string token, TokenClass cls);

  std::vector<std::string> tokens_;
  std::vector<TokenClass> classes_;
  std::unordered_map<std::string, TokenId> index_;
};

enum class SegmentKind : std::uint8_t {
  kSpecial,
  kMoleculeToken,
  kProteinToken,
  kFeatureSlot,
};

struct Segment {
  SegmentKind kind;
  std::string payload;   // token text for token kinds
  int slot_size = 0;     // 1 + n_q for feature slots
};

// The multimodal input layout: sequence markers wrapping either a feature
// block or biomolecular tokens.
struct FormedInput {
  std::vector<Segment> segments;

  // JSON Lines, one {"kind": ..., "payload": ...} object per segment.
  // Equal inputs serialize byte-identically.
  std::string to_jsonl() const;
};

enum class EntityKind : std::uint8_t { kMolecule, kProtein };

// Input formation: for molecules
//   <MOL> slot(1+n_q) </MOL> <SELFIES> tokens </SELFIES>
// and the analogous <PROT>/<FASTA> layout for proteins. The feature block
// is omitted when include_features is false; n_q must be >= 1 otherwise
// (DimensionMismatch).
FormedInput form_input(EntityKind kind, const std::vector<std::string>& tokens,
                       bool include_features, int n_q);

}  // namespace biomol

#endif  // BIOMOL_VOCAB_HPP_

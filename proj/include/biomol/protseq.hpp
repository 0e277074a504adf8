//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_PROTSEQ_HPP_
#define BIOMOL_PROTSEQ_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "biomol/errors.hpp"

namespace biomol {

// The 20 canonical one-letter amino-acid codes, alphabetical.
inline constexpr std::string_view kResidueAlphabet = "ACDEFGHIKLMNPQRSTVWY";

bool is_canonical_residue(char c);

// Validated amino-acid string over the canonical alphabet.
class ProteinSequence {
 public:
  // Uppercases the input; throws InvalidResidue (position = offset of the
  // first bad character) or EmptyRecord.
  explicit ProteinSequence(std::string_view residues);

  const std::string& str() const { return residues_; }
  std::size_t size() const { return residues_.size(); }
  char operator[](std::size_t i) const { return residues_[i]; }

  bool operator==(const ProteinSequence&) const = default;

 private:
  std::string residues_;
};

// True iff non-empty and every character is a canonical residue code.
// Case-sensitive by contract; callers normalize beforehand when needed.
bool validate_protein(std::string_view text);

struct FastaRecord {
  std::string header;  // text after '>' up to end of line
  ProteinSequence sequence;
};

// Splits on '>' headers; sequence lines are concatenated, whitespace
// stripped, uppercased. Throws InvalidResidue with a "line L, column C"
// message, or EmptyRecord for a header with no sequence.
std::vector<FastaRecord> parse_fasta(std::string_view text);

// One record per ">header\nsequence\n"; parse_fasta(write_fasta(r)) == r.
std::string write_fasta(const std::vector<FastaRecord>& records);

// Backbone atom coordinates per residue in the order N, C, CA, O.
struct BackboneResidue {
  std::array<std::array<double, 3>, 4> atoms;
};

struct ProteinStructure {
  ProteinSequence sequence;
  std::vector<BackboneResidue> backbone;  // length == sequence length
};

// Minimal backbone text loader: one line per residue holding 12 numbers
// (N, C, CA, O coordinates). Throws ParseError or LengthMismatch when the
// line count differs from the sequence length.
ProteinStructure load_backbone(const ProteinSequence& sequence,
                               std::string_view text);

}  // namespace biomol

#endif  // BIOMOL_PROTSEQ_HPP_

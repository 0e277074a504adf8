//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/protseq.hpp"

#include <cctype>
#include <sstream>

namespace biomol {

bool is_canonical_residue(char c) {
  return kResidueAlphabet.find(c) != std::string_view::npos;
}

ProteinSequence::ProteinSequence(std::string_view residues) {
  if (residues.empty()) {
    throw Error(ErrorKind::kEmptyRecord, "empty protein sequence");
  }
  residues_.reserve(residues.size());
  for (std::size_t i = 0; i < residues.size(); ++i) {
    char c = static_cast<char>(
        std::toupper(static_cast<unsigned char>(residues[i])));
    if (!is_canonical_residue(c)) {
      throw Error(ErrorKind::kInvalidResidue,
                  std::string("'") + residues[i] + "' is not a canonical residue",
                  i);
    }
    residues_.push_back(c);
  }
}

bool validate_protein(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (!is_canonical_residue(c)) return false;
  }
  return true;
}

std::vector<FastaRecord> parse_fasta(std::string_view text) {
  std::vector<FastaRecord> records;
  std::string header;
  std::string sequence;
  bool in_record = false;
  std::size_t line_no = 0;
  std::size_t seq_start_line = 0;

  auto flush = [&]() {
    if (!in_record) return;
    if (sequence.empty()) {
      throw Error(ErrorKind::kEmptyRecord,
                  "record '" + header + "' has no sequence");
    }
    records.push_back({header, ProteinSequence(sequence)});
    sequence.clear();
  };

  std::istringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      flush();
      header = line.substr(1);
      in_record = true;
      seq_start_line = line_no;
      continue;
    }
    if (!in_record) {
      throw Error(ErrorKind::kParseError,
                  "sequence data before the first '>' header");
    }
    for (std::size_t col = 0; col < line.size(); ++col) {
      char raw = line[col];
      if (std::isspace(static_cast<unsigned char>(raw))) continue;
      char c =
          static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
      if (!is_canonical_residue(c)) {
        throw Error(ErrorKind::kInvalidResidue,
                    std::string("'") + raw + "' at line " +
                        std::to_string(line_no) + ", column " +
                        std::to_string(col + 1),
                    col);
      }
      sequence.push_back(c);
    }
  }
  (void)seq_start_line;
  flush();
  return records;
}

std::string write_fasta(const std::vector<FastaRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    out += ">" + record.header + "\n" + record.sequence.str() + "\n";
  }
  return out;
}

ProteinStructure load_backbone(const ProteinSequence& sequence,
                               std::string_view text) {
  ProteinStructure structure{sequence, {}};
  std::istringstream stream{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    BackboneResidue residue{};
    for (int atom = 0; atom < 4; ++atom) {
      for (int axis = 0; axis < 3; ++axis) {
        if (!(fields >> residue.atoms[atom][axis])) {
          throw Error(ErrorKind::kParseError,
                      "line " + std::to_string(line_no) +
                          ": expected 12 numbers (N, C, CA, O coordinates)");
        }
      }
    }
    double extra;
    if (fields >> extra) {
      throw Error(ErrorKind::kParseError,
                  "line " + std::to_string(line_no) + ": trailing data");
    }
    structure.backbone.push_back(residue);
  }
  if (structure.backbone.size() != sequence.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "backbone has " + std::to_string(structure.backbone.size()) +
                    " residues, sequence has " +
                    std::to_string(sequence.size()));
  }
  return structure;
}

}  // namespace biomol

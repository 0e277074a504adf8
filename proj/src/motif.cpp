//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/motif.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <sstream>

namespace biomol {

int MotifVector::popcount() const {
  int count = 0;
  for (auto bit : bits) count += bit != 0;
  return count;
}

std::string MotifVector::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  const std::size_t n = bits.size();
  out.reserve((n + 3) / 4);
  for (std::size_t base = 0; base < n; base += 4) {
    int nibble = 0;
    for (std::size_t k = 0; k < 4 && base + k < n; ++k) {
      if (bits[base + k]) nibble |= 1 << (3 - k);
    }
    out.push_back(digits[nibble]);
  }
  return out;
}

namespace {

std::uint64_t pharmacophore_invariant(const MolecularGraph& g, int idx) {
  const Atom& atom = g.atom(idx);
  const bool nitrogen_or_oxygen =
      atom.element == "N" || atom.element == "O";
  std::uint64_t bits = 0;
  if (nitrogen_or_oxygen && atom.explicit_h >= 1) bits |= 1 << 0;  // donor
  if (nitrogen_or_oxygen) bits |= 1 << 1;                          // acceptor
  if (atom.formal_charge > 0) bits |= 1 << 2;
  if (atom.formal_charge < 0) bits |= 1 << 3;
  if (atom.aromatic) bits |= 1 << 4;
  const ElementInfo* info = ElementTable::instance().find(atom.element);
  if (info != nullptr && info->halogen) bits |= 1 << 5;
  return bits;
}

void append_le64(std::string& buffer, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    buffer.push_back(static_cast<char>(value >> (8 * i) & 0xFF));
  }
}

int fcfp_bond_code(BondOrder order) { return static_cast<int>(order); }

}  // namespace

MotifVector fcfp(const MolecularGraph& g, int radius, int n_bits) {
  if (g.atom_count() == 0) {
    throw Error(ErrorKind::kEmptyGraph, "fingerprint of an empty graph");
  }
  if (radius < 0 || n_bits < 1) {
    throw Error(ErrorKind::kValidationError, "radius >= 0, n_bits >= 1");
  }
  const int n = g.atom_count();
  MotifVector fp;
  fp.bits.assign(n_bits, 0);

  std::vector<std::uint64_t> invariants(n);
  for (int i = 0; i < n; ++i) {
    std::string buffer;
    append_le64(buffer, pharmacophore_invariant(g, i));
    invariants[i] = fnv1a64(buffer.data(), buffer.size());
    fp.bits[invariants[i] % n_bits] = 1;
  }

  for (int round = 1; round <= radius; ++round) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, std::uint64_t>> nbrs;
      for (int bidx : g.incident(i)) {
        const Bond& bond = g.bonds()[bidx];
        int other = bond.a == i ? bond.b : bond.a;
        nbrs.emplace_back(fcfp_bond_code(bond.order), invariants[other]);
      }
      std::sort(nbrs.begin(), nbrs.end());
      std::string buffer;
      append_le64(buffer, invariants[i]);
      for (const auto& [code, inv] : nbrs) {
        buffer.push_back(static_cast<char>(code));
        append_le64(buffer, inv);
      }
      next[i] = fnv1a64(buffer.data(), buffer.size());
      fp.bits[next[i] % n_bits] = 1;
    }
    invariants = std::move(next);
  }
  return fp;
}

MotifDictionary::MotifDictionary(std::vector<std::string> motifs)
    : motifs_(std::move(motifs)) {
  std::map<std::string, int> seen;
  for (const auto& motif : motifs_) {
    if (motif.empty()) {
      throw Error(ErrorKind::kValidationError, "empty motif entry");
    }
    if (!validate_protein(motif)) {
      throw Error(ErrorKind::kInvalidResidue, "motif " + motif);
    }
    if (++seen[motif] > 1) {
      throw Error(ErrorKind::kValidationError, "duplicate motif " + motif);
    }
  }
}

MotifDictionary MotifDictionary::load(std::string_view text) {
  std::vector<std::string> motifs;
  std::istringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    motifs.push_back(line);
  }
  return MotifDictionary(std::move(motifs));
}

std::string MotifDictionary::save() const {
  std::string out;
  for (const auto& motif : motifs_) {
    out += motif;
    out += '\n';
  }
  return out;
}

MotifVector protein_motif_vector(const ProteinSequence& p,
                                 const MotifDictionary& dict) {
  if (dict.size() == 0) {
    throw Error(ErrorKind::kValidationError, "empty motif dictionary");
  }
  MotifVector out;
  out.bits.assign(dict.size(), 0);
  const std::string& seq = p.str();
  for (std::size_t i = 0; i < dict.size(); ++i) {
    if (seq.find(dict[i]) != std::string::npos) out.bits[i] = 1;
  }
  return out;
}

Vector motif_prompt(const MotifVector& t, const Matrix& m) {
  if (t.size() != m.rows()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "indicator length " + std::to_string(t.size()) +
                    " != embedding rows " + std::to_string(m.rows()));
  }
  Vector prompt(m.cols(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t.bits[i]) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) prompt[j] += m(i, j);
  }
  return prompt;
}

MotifDictionary build_motif_dictionary(
    const std::vector<MotifAnnotation>& annotated, int min_count) {
  std::map<std::string, int> counts;
  for (const auto& record : annotated) {
    for (const auto& span : record.motif_spans) {
      if (span.empty() || !validate_protein(span)) continue;
      ++counts[span];
    }
  }
  std::vector<std::pair<std::string, int>> kept;
  for (const auto& [motif, count] : counts) {
    if (count >= min_count) kept.emplace_back(motif, count);
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto& x, const auto& y) {
              if (x.second != y.second) return x.second > y.second;
              return x.first < y.first;
            });
  std::vector<std::string> motifs;
  motifs.reserve(kept.size());
  for (auto& [motif, count] : kept) motifs.push_back(std::move(motif));
  return MotifDictionary(std::move(motifs));
}

}  // namespace biomol

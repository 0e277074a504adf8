//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_MOTIF_HPP_
#define BIOMOL_MOTIF_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "biomol/molgraph.hpp"
#include "biomol/protseq.hpp"
#include "biomol/tensor.hpp"

namespace biomol {

// Binary motif indicator. Length is 1024 for molecules (FCFP bits) or the
// dictionary size for proteins.
struct MotifVector {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  int popcount() const;
  std::string hex() const;  // big-endian nibbles, bit 0 = MSB of byte 0
};

// Functional-class circular fingerprint. The round-0 invariant per atom
// packs six pharmacophore flags into one integer:
//   bit 0  H-bond donor      (N or O carrying at least one hydrogen)
//   bit 1  H-bond acceptor   (N or O)
//   bit 2  positively ionizable (formal charge > 0)
//   bit 3  negatively ionizable (formal charge < 0)
//   bit 4  aromatic flag
//   bit 5  halogen (F, Cl, Br, I)
// Each round rehashes (invariant, sorted (bond code, neighbor invariant))
// with 64-bit FNV-1a; every round's environment hash (round 0 included)
// folds into n_bits by modulus. Throws EmptyGraph.
MotifVector fcfp(const MolecularGraph& g, int radius = 2, int n_bits = 1024);

// Ordered list of protein motif subsequences; index = bit position.
class MotifDictionary {
 public:
  MotifDictionary() = default;
  // Entries must be unique, non-empty, canonical-residue-only.
  explicit MotifDictionary(std::vector<std::string> motifs);

  // One motif per line, line order = bit index.
  static MotifDictionary load(std::string_view text);
  std::string save() const;

  std::size_t size() const { return motifs_.size(); }
  const std::string& operator[](std::size_t i) const { return motifs_[i]; }
  const std::vector<std::string>& motifs() const { return motifs_; }

 private:
  std::vector<std::string> motifs_;
};

// bit i = 1 iff dict[i] occurs as a contiguous substring of p.
MotifVector protein_motif_vector(const ProteinSequence& p,
                                 const MotifDictionary& dict);

// Motif prompt: P = T * M, the sum of embedding rows selected by the
// indicator. Throws DimensionMismatch.
Vector motif_prompt(const MotifVector& t, const Matrix& m);

struct MotifAnnotation {
  std::string sequence;                 // full protein sequence
  std::vector<std::string> motif_spans; // annotated motif subsequences
};

// Collects annotated motif subsequences, keeps those occurring at least
// min_count times across records, ordered by (descending count,
// lexicographic).
MotifDictionary build_motif_dictionary(
    const std::vector<MotifAnnotation>& annotated, int min_count = 2);

}  // namespace biomol

#endif  // BIOMOL_MOTIF_HPP_

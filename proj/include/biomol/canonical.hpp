//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_CANONICAL_HPP_
#define BIOMOL_CANONICAL_HPP_

#include <string>
#include <vector>

#include "biomol/molgraph.hpp"

namespace biomol {

// Canonical atom labels via iterative neighborhood refinement. The
// initial invariant is (element, charge, degree, explicit_h, aromatic);
// each round re-ranks atoms by (rank, sorted multiset of
// (bond order, neighbor rank)) until the partition stabilizes. Residual
// ties are resolved by branching: every atom of the smallest tied cell is
// tried as the distinguished one and the lexicographically smallest
// resulting SMILES decides. Returned ranks are a permutation of 0..n-1.
std::vector<int> canonical_ranks(const MolecularGraph& g);

// Canonical string form: write_smiles under canonical_ranks. Two graphs
// of the supported feature set are isomorphic iff their canonical forms
// are equal.
std::string canonical_form(const MolecularGraph& g);

}  // namespace biomol

#endif  // BIOMOL_CANONICAL_HPP_

//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_SMILES_HPP_
#define BIOMOL_SMILES_HPP_

#include <string>
#include <string_view>

#include "biomol/molgraph.hpp"

namespace biomol {

// Subset SMILES reader: organic-subset atoms, bracket atoms with charge
// and hydrogen count, ring closures (digits and %nn), branches, bond
// symbols - = # :. Lowercase atoms set the aromatic flag; implicit
// hydrogens are filled from the valence tables and stored explicitly.
// Stereo marks and isotopes throw UnsupportedFeature; malformed input
// throws SyntaxError / UnclosedRing / UnclosedBranch with the character
// position.
MolecularGraph parse_smiles(std::string_view text);

// Deterministic SMILES emission: depth-first from the atom with the
// lowest canonical label, neighbors in canonical-label order. Re-parsing
// the output yields an isomorphic graph. Atom order of the input does
// not affect the output string.
std::string write_smiles(const MolecularGraph& g);

namespace detail {
// Emission under caller-supplied labels (a permutation of 0..n-1); the
// canonicalizer drives this directly during tie-breaking.
std::string write_smiles_ranked(const MolecularGraph& g,
                                const std::vector<int>& ranks);
}  // namespace detail

}  // namespace biomol

#endif  // BIOMOL_SMILES_HPP_

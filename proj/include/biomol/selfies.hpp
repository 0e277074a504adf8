//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_SELFIES_HPP_
#define BIOMOL_SELFIES_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "biomol/molgraph.hpp"

namespace biomol {

// A SELFIES string as a list of bracket tokens. Tokens are stored with
// their brackets ("[C]", "[=Branch1]", ...); concatenating them
// reproduces the parsed input exactly.
struct SelfiesString {
  std::vector<std::string> tokens;

  std::string str() const;
  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
};

// Splits text on balanced bracket pairs. Throws EmptyInput,
// UnbalancedBracket, or CharacterOutsideBracket (position = offending
// character offset).
SelfiesString parse_selfies(std::string_view text);

// Decodes a token list under the SELFIES derivation rules. Decoding is
// total over the supported alphabet:
//  - atom tokens [<b>El<+/-n>] bond to the chain with order
//    min(prefix order, remaining capacity of the previous atom, capacity
//    of the new atom); a saturated chain ends the fragment;
//  - [<b>BranchL] consumes L index tokens giving Q, then Q+1 branch
//    tokens; branches from atoms with fewer than 2 free bonds are
//    consumed but produce nothing; the branch's first bond order is
//    capped by min(prefix order of the branch token, free bonds - 1);
//  - [<b>RingL] consumes L index tokens giving Q and bonds the current
//    atom to the atom Q+1 placement positions back, clipped at the first
//    atom; self, duplicate, and zero-capacity ring bonds are skipped;
//  - index value of L tokens t1..tL is sum(index(ti) * 16^(L-i)) over the
//    standard 16-symbol index alphabet.
// After derivation, implicit hydrogens are filled to the lowest allowed
// valence and stored on the atoms. Unsupported tokens throw UnknownToken.
MolecularGraph decode_selfies(const SelfiesString& s);

// Inverse of decode_selfies up to isomorphism: the result decodes to a
// graph with the same canonical form. Requires a connected,
// valence-valid graph of supported elements; aromatic bonds are not
// representable (UnsupportedFeature).
SelfiesString encode_selfies(const MolecularGraph& g);

// True when the token spells an atom, branch, or ring symbol of the
// supported alphabet (brackets included).
bool selfies_token_known(std::string_view token);

// The index value (0..15) a token contributes when consumed as a
// branch-length or ring-offset digit.
int selfies_index_value(std::string_view token);

}  // namespace biomol

#endif  // BIOMOL_SELFIES_HPP_

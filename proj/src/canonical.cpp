//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/canonical.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "biomol/smiles.hpp"

namespace biomol {

namespace {

int bond_code(BondOrder order) { return static_cast<int>(order); }

// Re-ranks until the partition stops refining. seed_ranks may contain
// arbitrary distinct-ish integers; output ranks are dense in 0..k-1.
std::vector<int> refine(const MolecularGraph& g, std::vector<int> ranks) {
  const int n = g.atom_count();
  auto dense = [&](std::vector<std::pair<std::vector<long>, int>>& keyed) {
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> out(n);
    int next = -1;
    const std::vector<long>* prev_key = nullptr;
    for (const auto& [key, idx] : keyed) {
      if (prev_key == nullptr || key != *prev_key) ++next;
      prev_key = &key;
      out[idx] = next;
    }
    return out;
  };

  int classes = -1;
  while (true) {
    std::vector<std::pair<std::vector<long>, int>> keyed(n);
    for (int i = 0; i < n; ++i) {
      std::vector<long> key;
      key.push_back(ranks[i]);
      std::vector<std::pair<int, int>> nbrs;
      for (int bidx : g.incident(i)) {
        const Bond& bond = g.bonds()[bidx];
        int other = bond.a == i ? bond.b : bond.a;
        nbrs.emplace_back(bond_code(bond.order), ranks[other]);
      }
      std::sort(nbrs.begin(), nbrs.end());
      for (const auto& [code, rank] : nbrs) {
        key.push_back(code);
        key.push_back(rank);
      }
      keyed[i] = {std::move(key), i};
    }
    ranks = dense(keyed);
    int now = 1 + *std::max_element(ranks.begin(), ranks.end());
    if (now == classes || now == n) break;
    classes = now;
  }
  return ranks;
}

std::vector<int> initial_ranks(const MolecularGraph& g) {
  const int n = g.atom_count();
  std::vector<std::pair<std::tuple<std::string, int, int, int, int>, int>>
      keyed(n);
  for (int i = 0; i < n; ++i) {
    const Atom& a = g.atom(i);
    keyed[i] = {{a.element, a.formal_charge, g.degree(i), a.explicit_h,
                 a.aromatic ? 1 : 0},
                i};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> ranks(n);
  int next = -1;
  const std::tuple<std::string, int, int, int, int>* prev = nullptr;
  for (const auto& [key, idx] : keyed) {
    if (prev == nullptr || key != *prev) ++next;
    prev = &key;
    ranks[idx] = next;
  }
  return ranks;
}

// Smallest-label-first branching over residual ties: every atom of the
// lowest tied cell is tried as the distinguished one; the smallest
// emitted string wins. Returns {string, ranks-as-permutation}.
std::pair<std::string, std::vector<int>> canonicalize(
    const MolecularGraph& g, const std::vector<int>& ranks) {
  const int n = g.atom_count();
  int tied_rank = -1;
  for (int r = 0; r < n && tied_rank < 0; ++r) {
    int count = 0;
    for (int i = 0; i < n; ++i) count += ranks[i] == r ? 1 : 0;
    if (count > 1) tied_rank = r;
  }
  if (tied_rank < 0) {
    return {detail::write_smiles_ranked(g, ranks), ranks};
  }

  std::pair<std::string, std::vector<int>> best;
  for (int i = 0; i < n; ++i) {
    if (ranks[i] != tied_rank) continue;
    // distinguish atom i below its cell, then re-refine
    std::vector<int> seeded(n);
    for (int j = 0; j < n; ++j) {
      seeded[j] = 2 * ranks[j] + (j == i ? 0 : 1);
    }
    auto candidate = canonicalize(g, refine(g, std::move(seeded)));
    if (best.first.empty() || candidate.first < best.first) {
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace

std::vector<int> canonical_ranks(const MolecularGraph& g) {
  if (g.atom_count() == 0) return {};
  return canonicalize(g, refine(g, initial_ranks(g))).second;
}

std::string canonical_form(const MolecularGraph& g) {
  if (g.atom_count() == 0) return "";
  return canonicalize(g, refine(g, initial_ranks(g))).first;
}

}  // namespace biomol

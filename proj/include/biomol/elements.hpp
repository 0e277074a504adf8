//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_ELEMENTS_HPP_
#define BIOMOL_ELEMENTS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace biomol {

// Supported element table: the SMILES organic subset plus common
// heteroatoms. Extension entries can be registered at startup for exotic
// inputs; the core table is fixed so that feature vectors and token ids
// stay stable.
struct ElementInfo {
  std::string symbol;
  // Allowed total valences (bond order sum + attached hydrogens) for the
  // neutral atom, ascending.
  std::vector<int> valences;
  bool organic_subset = false;  // may be written bare in SMILES
  bool halogen = false;
};

class ElementTable {
 public:
  // Core entries: B, C, N, O, P, S, F, Cl, Br, I, Se, Si.
  static const ElementTable& instance();

  const ElementInfo* find(std::string_view symbol) const;
  // Index into the core table; extension elements index past the core.
  std::optional<int> index_of(std::string_view symbol) const;
  // Core entries by index; extension indices follow the core table.
  const ElementInfo& at(int index) const;
  int size() const { return static_cast<int>(entries_.size()); }
  static int core_size() { return 12; }

  // Registers an extension element (idempotent for equal definitions).
  static void register_extension(const ElementInfo& info);

 private:
  ElementTable();
  std::vector<ElementInfo> entries_;
};

// Charge-adjusted allowed valences. The shift direction follows the
// element's periodic group: group 13 loses capacity with positive charge,
// group 14 loses capacity with charge of either sign, groups 15-17 gain
// capacity with positive charge. Values below zero are dropped.
std::vector<int> allowed_valences(std::string_view element, int charge);

// max(allowed_valences), or 0 when the set is empty. This is the bond
// capacity used by the SELFIES derivation rules.
int bond_capacity(std::string_view element, int charge);

// Smallest allowed valence >= bond_order_sum, used for implicit-hydrogen
// filling; returns std::nullopt when bond_order_sum exceeds every allowed
// valence.
std::optional<int> fill_target(std::string_view element, int charge,
                               int bond_order_sum);

}  // namespace biomol

#endif  // BIOMOL_ELEMENTS_HPP_

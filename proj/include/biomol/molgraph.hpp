//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_MOLGRAPH_HPP_
#define BIOMOL_MOLGRAPH_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biomol/elements.hpp"
#include "biomol/errors.hpp"

namespace biomol {

// Bond orders. Aromatic contributes 1.5 to plain valence sums; valence
// checking resolves aromatic systems through a Kekule feasibility search.
enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

double bond_order_value(BondOrder order);

struct Atom {
  std::string element;
  int formal_charge = 0;
  int explicit_h = 0;
  bool aromatic = false;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;
};

using Point3 = std::array<double, 3>;

class MolecularGraph {
 public:
  MolecularGraph() = default;

  int add_atom(Atom atom);
  // Throws on self-bonds, out-of-range endpoints, and duplicate pairs.
  void add_bond(int a, int b, BondOrder order);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const Atom& atom(int i) const { return atoms_[i]; }
  Atom& atom(int i) { return atoms_[i]; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }

  // Bond indices incident to atom i.
  const std::vector<int>& incident(int i) const { return adjacency_[i]; }
  int degree(int i) const { return static_cast<int>(adjacency_[i].size()); }
  const Bond* find_bond(int a, int b) const;

  // Sum of bond orders at atom i, aromatic counted 1.5; excludes
  // explicit hydrogens.
  double bond_order_sum(int i) const;

  bool has_coordinates() const { return !coordinates_.empty(); }
  const std::vector<Point3>& coordinates() const { return coordinates_; }
  // Count must match the atom count.
  void set_coordinates(std::vector<Point3> coords);

  // Returns atoms reachable from atom 0 == all atoms.
  bool connected() const;

  // Heavy-atom molecular formula plus implicit H, e.g. "C6H11FO".
  std::string formula() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<Point3> coordinates_;
};

// One entry per offending atom.
struct ValenceViolation {
  int atom_index;
  double observed;    // bond order sum + explicit hydrogens
  int max_allowed;    // charge-adjusted
  std::string detail;
};

struct ValenceReport {
  std::vector<ValenceViolation> violations;
  bool valid() const { return violations.empty(); }
};

// Reports atoms whose total bond order (plus explicit hydrogens) exceeds
// the charge-adjusted maximum allowed valence. Atoms participating in
// aromatic bonds are resolved through a Kekule assignment search over
// each aromatic component; when no single/double assignment keeps every
// member within its limit, all members of the component are flagged.
ValenceReport check_valence(const MolecularGraph& g);

}  // namespace biomol

#endif  // BIOMOL_MOLGRAPH_HPP_

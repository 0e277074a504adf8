//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/molgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace biomol {

double bond_order_value(BondOrder order) {
  switch (order) {
    case BondOrder::kSingle:
      return 1.0;
    case BondOrder::kDouble:
      return 2.0;
    case BondOrder::kTriple:
      return 3.0;
    case BondOrder::kAromatic:
      return 1.5;
  }
  return 0.0;
}

int MolecularGraph::add_atom(Atom atom) {
  atoms_.push_back(std::move(atom));
  adjacency_.emplace_back();
  return static_cast<int>(atoms_.size()) - 1;
}

void MolecularGraph::add_bond(int a, int b, BondOrder order) {
  if (a == b) {
    throw Error(ErrorKind::kValidationError, "self-bond");
  }
  if (a < 0 || b < 0 || a >= atom_count() || b >= atom_count()) {
    throw Error(ErrorKind::kValidationError, "bond endpoint out of range");
  }
  if (find_bond(a, b) != nullptr) {
    throw Error(ErrorKind::kValidationError, "duplicate bond");
  }
  bonds_.push_back({a, b, order});
  int idx = static_cast<int>(bonds_.size()) - 1;
  adjacency_[a].push_back(idx);
  adjacency_[b].push_back(idx);
}

const Bond* MolecularGraph::find_bond(int a, int b) const {
  for (int idx : adjacency_[a]) {
    const Bond& bond = bonds_[idx];
    if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) {
      return &bond;
    }
  }
  return nullptr;
}

double MolecularGraph::bond_order_sum(int i) const {
  double sum = 0.0;
  for (int idx : adjacency_[i]) sum += bond_order_value(bonds_[idx].order);
  return sum;
}

void MolecularGraph::set_coordinates(std::vector<Point3> coords) {
  if (static_cast<int>(coords.size()) != atom_count()) {
    throw Error(ErrorKind::kLengthMismatch,
                "coordinate count differs from atom count");
  }
  coordinates_ = std::move(coords);
}

bool MolecularGraph::connected() const {
  if (atoms_.empty()) return true;
  std::vector<bool> seen(atoms_.size(), false);
  std::vector<int> stack = {0};
  seen[0] = true;
  int visited = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int idx : adjacency_[v]) {
      const Bond& bond = bonds_[idx];
      int u = bond.a == v ? bond.b : bond.a;
      if (!seen[u]) {
        seen[u] = true;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == atom_count();
}

std::string MolecularGraph::formula() const {
  std::map<std::string, int> counts;
  int hydrogens = 0;
  for (const Atom& atom : atoms_) {
    ++counts[atom.element];
    hydrogens += atom.explicit_h;
  }
  // Hill order: C, H, then alphabetical.
  std::ostringstream out;
  auto emit = [&out](const std::string& symbol, int count) {
    out << symbol;
    if (count > 1) out << count;
  };
  if (auto it = counts.find("C"); it != counts.end()) {
    emit("C", it->second);
    counts.erase(it);
  }
  if (hydrogens > 0) emit("H", hydrogens);
  for (const auto& [symbol, count] : counts) emit(symbol, count);
  return out.str();
}

namespace {

// Search for a single/double assignment of the component's aromatic bonds
// keeping every member atom within its charge-adjusted maximum valence.
bool kekule_feasible(const MolecularGraph& g,
                     const std::vector<int>& component_bonds,
                     const std::vector<double>& fixed_load,
                     const std::vector<int>& max_allowed) {
  std::vector<double> load = fixed_load;
  const auto& bonds = g.bonds();

  // Try order 1 then 2 for each aromatic bond, backtracking.
  struct Frame {
    std::size_t bond_pos;
    int order;
  };
  std::vector<int> chosen(component_bonds.size(), 0);
  std::size_t pos = 0;
  while (true) {
    if (pos == component_bonds.size()) return true;
    const Bond& bond = bonds[component_bonds[pos]];
    bool advanced = false;
    for (int order = chosen[pos] + 1; order <= 2; ++order) {
      if (load[bond.a] + order <= max_allowed[bond.a] &&
          load[bond.b] + order <= max_allowed[bond.b]) {
        chosen[pos] = order;
        load[bond.a] += order;
        load[bond.b] += order;
        ++pos;
        advanced = true;
        break;
      }
    }
    if (advanced) continue;
    // backtrack
    chosen[pos] = 0;
    if (pos == 0) return false;
    --pos;
    const Bond& prev = bonds[component_bonds[pos]];
    load[prev.a] -= chosen[pos];
    load[prev.b] -= chosen[pos];
  }
}

}  // namespace

ValenceReport check_valence(const MolecularGraph& g) {
  ValenceReport report;
  const int n = g.atom_count();

  std::vector<int> max_allowed(n, 0);
  std::vector<double> aromatic_free_load(n, 0.0);  // non-aromatic bonds + H
  std::vector<int> aromatic_degree(n, 0);
  for (int i = 0; i < n; ++i) {
    const Atom& atom = g.atom(i);
    const auto valences = allowed_valences(atom.element, atom.formal_charge);
    max_allowed[i] = *std::max_element(valences.begin(), valences.end());
    aromatic_free_load[i] = atom.explicit_h;
  }
  for (const Bond& bond : g.bonds()) {
    if (bond.order == BondOrder::kAromatic) {
      ++aromatic_degree[bond.a];
      ++aromatic_degree[bond.b];
    } else {
      aromatic_free_load[bond.a] += bond_order_value(bond.order);
      aromatic_free_load[bond.b] += bond_order_value(bond.order);
    }
  }

  // Plain atoms: flag when bond order sum + hydrogens exceeds the limit.
  for (int i = 0; i < n; ++i) {
    if (aromatic_degree[i] > 0) continue;
    double total = aromatic_free_load[i];
    if (total > max_allowed[i] + 1e-9) {
      report.violations.push_back(
          {i, total, max_allowed[i],
           g.atom(i).element + " exceeds allowed valence"});
    }
  }

  // Aromatic components: group aromatic bonds by connectivity and search
  // for a feasible Kekule assignment per component.
  const auto& bonds = g.bonds();
  std::vector<bool> bond_seen(bonds.size(), false);
  for (std::size_t start = 0; start < bonds.size(); ++start) {
    if (bonds[start].order != BondOrder::kAromatic || bond_seen[start]) {
      continue;
    }
    std::vector<int> component;
    std::vector<int> stack = {static_cast<int>(start)};
    bond_seen[start] = true;
    while (!stack.empty()) {
      int bidx = stack.back();
      stack.pop_back();
      component.push_back(bidx);
      for (int endpoint : {bonds[bidx].a, bonds[bidx].b}) {
        for (int other : g.incident(endpoint)) {
          if (!bond_seen[other] &&
              bonds[other].order == BondOrder::kAromatic) {
            bond_seen[other] = true;
            stack.push_back(other);
          }
        }
      }
    }
    if (!kekule_feasible(g, component, aromatic_free_load, max_allowed)) {
      std::vector<int> members;
      for (int bidx : component) {
        members.push_back(bonds[bidx].a);
        members.push_back(bonds[bidx].b);
      }
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()),
                    members.end());
      for (int atom_idx : members) {
        report.violations.push_back(
            {atom_idx,
             aromatic_free_load[atom_idx] + 1.5 * aromatic_degree[atom_idx],
             max_allowed[atom_idx],
             "no Kekule assignment fits the aromatic system"});
      }
    }
  }

  std::sort(report.violations.begin(), report.violations.end(),
            [](const ValenceViolation& x, const ValenceViolation& y) {
              return x.atom_index < y.atom_index;
            });
  return report;
}

}  // namespace biomol

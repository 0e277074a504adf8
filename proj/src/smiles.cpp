//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "biomol/canonical.hpp"

namespace biomol {

namespace {

bool is_aromatic_symbol_allowed(const std::string& element) {
  return element == "B" || element == "C" || element == "N" ||
         element == "O" || element == "P" || element == "S" ||
         element == "Se";
}

struct PendingRing {
  int atom = -1;
  std::optional<BondOrder> order;
  std::size_t open_pos = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MolecularGraph run() {
    if (text_.empty()) {
      throw Error(ErrorKind::kEmptyInput, "empty SMILES string");
    }
    while (pos_ < text_.size()) {
      step();
    }
    if (!branch_stack_.empty()) {
      throw Error(ErrorKind::kUnclosedBranch, "unclosed '('",
                  branch_stack_.back().second);
    }
    if (pending_bond_.has_value()) {
      throw Error(ErrorKind::kSyntaxError, "dangling bond symbol",
                  pending_bond_pos_);
    }
    if (!rings_.empty()) {
      throw Error(ErrorKind::kUnclosedRing,
                  "ring closure " + std::to_string(rings_.begin()->first) +
                      " never closed",
                  rings_.begin()->second.open_pos);
    }
    if (graph_.atom_count() == 0) {
      throw Error(ErrorKind::kSyntaxError, "no atoms", 0);
    }
    fill_hydrogens();
    return std::move(graph_);
  }

 private:
  void step() {
    char c = text_[pos_];
    switch (c) {
      case '-':
        set_pending(BondOrder::kSingle);
        return;
      case '=':
        set_pending(BondOrder::kDouble);
        return;
      case '#':
        set_pending(BondOrder::kTriple);
        return;
      case ':':
        set_pending(BondOrder::kAromatic);
        return;
      case '/':
      case '\\':
        throw Error(ErrorKind::kUnsupportedFeature,
                    "stereo bonds are not supported", pos_);
      case '(':
        if (prev_ < 0) {
          throw Error(ErrorKind::kSyntaxError, "branch before any atom",
                      pos_);
        }
        if (pending_bond_.has_value()) {
          throw Error(ErrorKind::kSyntaxError, "bond before '('", pos_);
        }
        branch_stack_.emplace_back(prev_, pos_);
        ++pos_;
        return;
      case ')':
        if (branch_stack_.empty()) {
          throw Error(ErrorKind::kSyntaxError, "unmatched ')'", pos_);
        }
        if (pending_bond_.has_value()) {
          throw Error(ErrorKind::kSyntaxError, "dangling bond before ')'",
                      pos_);
        }
        prev_ = branch_stack_.back().first;
        branch_stack_.pop_back();
        ++pos_;
        return;
      case '%': {
        if (pos_ + 2 >= text_.size() ||
            !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
            !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
          throw Error(ErrorKind::kSyntaxError, "'%' needs two digits", pos_);
        }
        int number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
        ring_closure(number, pos_);
        pos_ += 3;
        return;
      }
      case '.':
        throw Error(ErrorKind::kUnsupportedFeature,
                    "disconnected components are not supported", pos_);
      case '[':
        bracket_atom();
        return;
      default:
        if (std::isdigit(static_cast<unsigned char>(c))) {
          ring_closure(c - '0', pos_);
          ++pos_;
          return;
        }
        organic_atom();
        return;
    }
  }

  void set_pending(BondOrder order) {
    if (pending_bond_.has_value()) {
      throw Error(ErrorKind::kSyntaxError, "two bond symbols in a row", pos_);
    }
    if (prev_ < 0) {
      throw Error(ErrorKind::kSyntaxError, "bond before any atom", pos_);
    }
    pending_bond_ = order;
    pending_bond_pos_ = pos_;
    ++pos_;
  }

  // Organic-subset atom: B, C, N, O, P, S, F, Cl, Br, I and the aromatic
  // lowercase forms b, c, n, o, p, s.
  void organic_atom() {
    std::size_t start = pos_;
    char c = text_[pos_];
    std::string element;
    bool aromatic = false;
    if (std::islower(static_cast<unsigned char>(c))) {
      element = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      aromatic = true;
      if (!is_aromatic_symbol_allowed(element)) {
        throw Error(ErrorKind::kSyntaxError,
                    std::string("unknown atom '") + c + "'", start);
      }
      ++pos_;
    } else {
      element = c;
      ++pos_;
      if ((c == 'C' && pos_ < text_.size() && text_[pos_] == 'l') ||
          (c == 'B' && pos_ < text_.size() && text_[pos_] == 'r')) {
        element += text_[pos_];
        ++pos_;
      }
    }
    const ElementInfo* info = ElementTable::instance().find(element);
    if (info == nullptr || !info->organic_subset) {
      throw Error(ErrorKind::kSyntaxError,
                  "unknown atom '" + element + "'", start);
    }
    place({element, 0, 0, aromatic}, /*bracket=*/false, start);
  }

  void bracket_atom() {
    std::size_t start = pos_;
    std::size_t close = text_.find(']', pos_);
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::kSyntaxError, "unterminated '['", start);
    }
    std::string_view body = text_.substr(pos_ + 1, close - pos_ - 1);
    std::size_t i = 0;
    auto fail = [&](const std::string& message, ErrorKind kind =
                                                    ErrorKind::kSyntaxError) {
      throw Error(kind, message, start + 1 + i);
    };
    if (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) {
      fail("isotopes are not supported", ErrorKind::kUnsupportedFeature);
    }
    if (i >= body.size()) fail("empty bracket atom");

    std::string element;
    bool aromatic = false;
    if (std::islower(static_cast<unsigned char>(body[i]))) {
      aromatic = true;
      element = static_cast<char>(
          std::toupper(static_cast<unsigned char>(body[i])));
      ++i;
      // two-letter aromatic element: [se]
      if (i < body.size() &&
          std::islower(static_cast<unsigned char>(body[i]))) {
        std::string two = element;
        two += body[i];
        if (ElementTable::instance().find(two) != nullptr) {
          element = two;
          ++i;
        }
      }
      if (!is_aromatic_symbol_allowed(element)) {
        fail("element cannot be aromatic: " + element);
      }
    } else {
      element = body[i];
      ++i;
      if (i < body.size() &&
          std::islower(static_cast<unsigned char>(body[i]))) {
        std::string two = element;
        two += body[i];
        if (ElementTable::instance().find(two) != nullptr) {
          element = two;
          ++i;
        }
      }
      if (ElementTable::instance().find(element) == nullptr) {
        fail("unknown element '" + element + "'");
      }
    }

    if (i < body.size() && body[i] == '@') {
      fail("stereocenters are not supported", ErrorKind::kUnsupportedFeature);
    }

    int hcount = 0;
    if (i < body.size() && body[i] == 'H') {
      ++i;
      hcount = 1;
      if (i < body.size() &&
          std::isdigit(static_cast<unsigned char>(body[i]))) {
        hcount = body[i] - '0';
        ++i;
      }
    }

    int charge = 0;
    if (i < body.size() && (body[i] == '+' || body[i] == '-')) {
      int sign = body[i] == '+' ? 1 : -1;
      ++i;
      if (i < body.size() &&
          std::isdigit(static_cast<unsigned char>(body[i]))) {
        charge = sign * (body[i] - '0');
        ++i;
      } else {
        charge = sign;
        while (i < body.size() && body[i] == (sign > 0 ? '+' : '-')) {
          charge += sign;
          ++i;
        }
      }
    }
    if (i != body.size()) fail("unexpected bracket content");

    pos_ = close + 1;
    place({element, charge, hcount, aromatic}, /*bracket=*/true, start);
  }

  void place(Atom atom, bool bracket, std::size_t at) {
    int idx = graph_.add_atom(std::move(atom));
    bracket_specified_.push_back(bracket);
    if (prev_ >= 0) {
      graph_.add_bond(prev_, idx, resolve_order(prev_, idx));
    } else if (pending_bond_.has_value()) {
      throw Error(ErrorKind::kSyntaxError, "bond with no preceding atom", at);
    }
    prev_ = idx;
  }

  BondOrder resolve_order(int a, int b) {
    if (pending_bond_.has_value()) {
      BondOrder order = *pending_bond_;
      pending_bond_.reset();
      return order;
    }
    return graph_.atom(a).aromatic && graph_.atom(b).aromatic
               ? BondOrder::kAromatic
               : BondOrder::kSingle;
  }

  void ring_closure(int number, std::size_t at) {
    if (prev_ < 0) {
      throw Error(ErrorKind::kSyntaxError, "ring digit before any atom", at);
    }
    auto it = rings_.find(number);
    if (it == rings_.end()) {
      PendingRing open;
      open.atom = prev_;
      open.order = pending_bond_;
      open.open_pos = at;
      pending_bond_.reset();
      rings_[number] = open;
      return;
    }
    PendingRing open = it->second;
    rings_.erase(it);
    if (open.atom == prev_) {
      throw Error(ErrorKind::kSyntaxError, "ring closure to the same atom",
                  at);
    }
    std::optional<BondOrder> order = open.order;
    if (pending_bond_.has_value()) {
      if (order.has_value() && *order != *pending_bond_) {
        throw Error(ErrorKind::kSyntaxError, "ring bond symbols disagree",
                    at);
      }
      order = pending_bond_;
      pending_bond_.reset();
    }
    if (!order.has_value()) {
      order = graph_.atom(open.atom).aromatic && graph_.atom(prev_).aromatic
                  ? BondOrder::kAromatic
                  : BondOrder::kSingle;
    }
    if (graph_.find_bond(open.atom, prev_) != nullptr) {
      throw Error(ErrorKind::kSyntaxError, "duplicate ring bond", at);
    }
    graph_.add_bond(open.atom, prev_, *order);
  }

  // Bracket atoms keep their stated hydrogen count; organic-subset atoms
  // fill to the lowest allowed valence. Aromatic sums use floor(1.5 * k)
  // so Kekule-resolvable atoms land on integers.
  void fill_hydrogens() {
    for (int i = 0; i < graph_.atom_count(); ++i) {
      if (bracket_specified_[i]) continue;
      Atom& atom = graph_.atom(i);
      int bonds =
          static_cast<int>(std::floor(graph_.bond_order_sum(i) + 1e-9));
      auto target = fill_target(atom.element, atom.formal_charge, bonds);
      atom.explicit_h = target.has_value() ? *target - bonds : 0;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  MolecularGraph graph_;
  std::vector<bool> bracket_specified_;
  int prev_ = -1;
  std::optional<BondOrder> pending_bond_;
  std::size_t pending_bond_pos_ = 0;
  std::vector<std::pair<int, std::size_t>> branch_stack_;
  std::map<int, PendingRing> rings_;
};

// ------------------------------------------------------------------
// Writer: two passes over the same rank-ordered depth-first walk. The
// first pass classifies bonds into tree and ring-closure bonds; the
// second emits text with ring digits allocated smallest-free-first.

class Writer {
 public:
  Writer(const MolecularGraph& g, const std::vector<int>& ranks)
      : graph_(g), ranks_(ranks) {}

  std::string run() {
    const int n = graph_.atom_count();
    if (n == 0) return "";
    if (!graph_.connected()) {
      throw Error(ErrorKind::kUnsupportedFeature,
                  "disconnected graphs are not written");
    }
    int root = 0;
    for (int i = 1; i < n; ++i) {
      if (ranks_[i] < ranks_[root]) root = i;
    }

    is_ring_bond_.assign(graph_.bonds().size(), false);
    visited_.assign(n, false);
    classify(root, -1);

    visited_.assign(n, false);
    digit_free_.assign(100, true);
    std::ostringstream out;
    emit(root, -1, out);
    return out.str();
  }

 private:
  std::vector<int> ordered_neighbors(int atom) const {
    std::vector<int> bidxs(graph_.incident(atom).begin(),
                           graph_.incident(atom).end());
    std::sort(bidxs.begin(), bidxs.end(), [&](int x, int y) {
      const Bond& bx = graph_.bonds()[x];
      const Bond& by = graph_.bonds()[y];
      int ox = bx.a == atom ? bx.b : bx.a;
      int oy = by.a == atom ? by.b : by.a;
      return ranks_[ox] < ranks_[oy];
    });
    return bidxs;
  }

  void classify(int atom, int via_bond) {
    visited_[atom] = true;
    for (int bidx : ordered_neighbors(atom)) {
      if (bidx == via_bond || is_ring_bond_[bidx] || tree_bond_.count(bidx)) {
        continue;
      }
      const Bond& bond = graph_.bonds()[bidx];
      int other = bond.a == atom ? bond.b : bond.a;
      if (visited_[other]) {
        is_ring_bond_[bidx] = true;
      } else {
        tree_bond_.insert(bidx);
        classify(other, bidx);
      }
    }
  }

  std::string bond_text(const Bond& bond) const {
    bool both_aromatic =
        graph_.atom(bond.a).aromatic && graph_.atom(bond.b).aromatic;
    switch (bond.order) {
      case BondOrder::kSingle:
        return both_aromatic ? "-" : "";
      case BondOrder::kDouble:
        return "=";
      case BondOrder::kTriple:
        return "#";
      case BondOrder::kAromatic:
        return both_aromatic ? "" : ":";
    }
    return "";
  }

  std::string atom_text(int idx) const {
    const Atom& atom = graph_.atom(idx);
    const ElementInfo* info = ElementTable::instance().find(atom.element);
    if (info == nullptr) {
      throw Error(ErrorKind::kUnsupportedElement, atom.element);
    }
    std::string symbol = atom.element;
    if (atom.aromatic) {
      for (auto& ch : symbol) {
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      }
    }
    if (info->organic_subset && atom.formal_charge == 0) {
      int bonds =
          static_cast<int>(std::floor(graph_.bond_order_sum(idx) + 1e-9));
      auto target = fill_target(atom.element, 0, bonds);
      int default_h = target.has_value() ? *target - bonds : 0;
      if (default_h == atom.explicit_h) return symbol;
    }
    std::string out = "[" + symbol;
    if (atom.explicit_h == 1) {
      out += "H";
    } else if (atom.explicit_h > 1) {
      out += "H" + std::to_string(atom.explicit_h);
    }
    if (atom.formal_charge != 0) {
      out += atom.formal_charge > 0 ? "+" : "-";
      if (std::abs(atom.formal_charge) > 1) {
        out += std::to_string(std::abs(atom.formal_charge));
      }
    }
    out += "]";
    return out;
  }

  static std::string digit_text(int digit) {
    if (digit < 10) return std::string(1, static_cast<char>('0' + digit));
    return "%" + std::to_string(digit);
  }

  int allocate_digit() {
    for (int d = 1; d < 100; ++d) {
      if (digit_free_[d]) {
        digit_free_[d] = false;
        return d;
      }
    }
    throw Error(ErrorKind::kUnsupportedFeature, "too many open rings");
  }

  void emit(int atom, int via_bond, std::ostringstream& out) {
    visited_[atom] = true;
    out << atom_text(atom);

    for (int bidx : ordered_neighbors(atom)) {
      if (!is_ring_bond_[bidx]) continue;
      const Bond& bond = graph_.bonds()[bidx];
      auto it = open_digit_.find(bidx);
      if (it == open_digit_.end()) {
        int digit = allocate_digit();
        open_digit_[bidx] = digit;
        out << bond_text(bond) << digit_text(digit);
      } else {
        out << digit_text(it->second);
        digit_free_[it->second] = true;
        open_digit_.erase(it);
      }
    }

    std::vector<int> children;
    for (int bidx : ordered_neighbors(atom)) {
      if (bidx == via_bond || is_ring_bond_[bidx]) continue;
      const Bond& bond = graph_.bonds()[bidx];
      int other = bond.a == atom ? bond.b : bond.a;
      if (!visited_[other]) children.push_back(bidx);
    }

    for (std::size_t c = 0; c < children.size(); ++c) {
      const Bond& bond = graph_.bonds()[children[c]];
      int other = bond.a == atom ? bond.b : bond.a;
      bool last = c + 1 == children.size();
      if (!last) out << "(";
      out << bond_text(bond);
      emit(other, children[c], out);
      if (!last) out << ")";
    }
  }

  const MolecularGraph& graph_;
  const std::vector<int>& ranks_;
  std::vector<bool> visited_;
  std::vector<bool> is_ring_bond_;
  std::set<int> tree_bond_;
  std::map<int, int> open_digit_;
  std::vector<bool> digit_free_;
};

}  // namespace

MolecularGraph parse_smiles(std::string_view text) {
  return Parser(text).run();
}

namespace detail {
std::string write_smiles_ranked(const MolecularGraph& g,
                                const std::vector<int>& ranks) {
  return Writer(g, ranks).run();
}
}  // namespace detail

std::string write_smiles(const MolecularGraph& g) {
  return detail::write_smiles_ranked(g, canonical_ranks(g));
}

}  // namespace biomol

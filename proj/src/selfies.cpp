//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/selfies.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "biomol/canonical.hpp"

namespace biomol {

std::string SelfiesString::str() const {
  std::string out;
  for (const auto& t : tokens) out += t;
  return out;
}

SelfiesString parse_selfies(std::string_view text) {
  if (text.empty()) {
    throw Error(ErrorKind::kEmptyInput, "empty SELFIES string");
  }
  SelfiesString result;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c != '[') {
      throw Error(c == ']' ? ErrorKind::kUnbalancedBracket
                           : ErrorKind::kCharacterOutsideBracket,
                  std::string("unexpected '") + c + "'", i);
    }
    std::size_t close = text.find_first_of("[]", i + 1);
    if (close == std::string_view::npos || text[close] == '[') {
      throw Error(ErrorKind::kUnbalancedBracket, "unterminated '['", i);
    }
    if (close == i + 1) {
      throw Error(ErrorKind::kSyntaxError, "empty bracket group", i);
    }
    result.tokens.emplace_back(text.substr(i, close - i + 1));
    i = close + 1;
  }
  return result;
}

namespace {

// ------------------------------------------------------------------
// Token classification

struct AtomToken {
  int bond_order = 1;  // from the =/# prefix
  std::string element;
  int charge = 0;
};

struct StructToken {
  bool is_branch = false;  // otherwise ring
  int bond_order = 1;
  int index_len = 1;  // L of BranchL / RingL
};

// Parses "[<prefix><El><+/-n>]"; nullopt when not a well-formed atom
// token over the supported table.
std::optional<AtomToken> match_atom(std::string_view token) {
  if (token.size() < 3 || token.front() != '[' || token.back() != ']') {
    return std::nullopt;
  }
  std::string_view body = token.substr(1, token.size() - 2);
  AtomToken atom;
  if (!body.empty() && (body[0] == '=' || body[0] == '#')) {
    atom.bond_order = body[0] == '=' ? 2 : 3;
    body.remove_prefix(1);
  }
  std::size_t elem_len = 0;
  while (elem_len < body.size() &&
         (std::isalpha(static_cast<unsigned char>(body[elem_len])))) {
    ++elem_len;
  }
  // Longest alphabetic prefix that names a supported element; two-letter
  // symbols (Cl, Br, Se, Si) take precedence over one-letter reads.
  const ElementTable& table = ElementTable::instance();
  std::string element;
  for (std::size_t len = std::min<std::size_t>(elem_len, 2); len >= 1; --len) {
    std::string candidate(body.substr(0, len));
    if (table.find(candidate) != nullptr && len == elem_len) {
      element = candidate;
      break;
    }
    if (len == 1) return std::nullopt;
  }
  if (element.empty()) return std::nullopt;
  atom.element = element;
  body.remove_prefix(element.size());
  if (!body.empty()) {
    char sign = body[0];
    if ((sign != '+' && sign != '-') || body.size() != 2 ||
        !std::isdigit(static_cast<unsigned char>(body[1]))) {
      return std::nullopt;
    }
    int magnitude = body[1] - '0';
    if (magnitude < 1 || magnitude > 4) return std::nullopt;
    atom.charge = sign == '+' ? magnitude : -magnitude;
  }
  return atom;
}

std::optional<StructToken> match_struct(std::string_view token) {
  if (token.size() < 3 || token.front() != '[' || token.back() != ']') {
    return std::nullopt;
  }
  std::string_view body = token.substr(1, token.size() - 2);
  StructToken st;
  if (!body.empty() && (body[0] == '=' || body[0] == '#')) {
    st.bond_order = body[0] == '=' ? 2 : 3;
    body.remove_prefix(1);
  }
  std::string_view kind;
  if (body.starts_with("Branch")) {
    st.is_branch = true;
    kind = body.substr(6);
  } else if (body.starts_with("Ring")) {
    st.is_branch = false;
    kind = body.substr(4);
  } else {
    return std::nullopt;
  }
  if (kind.size() != 1 || kind[0] < '1' || kind[0] > '3') return std::nullopt;
  st.index_len = kind[0] - '0';
  return st;
}

// The standard 16-symbol index alphabet; everything else counts 0.
const std::map<std::string_view, int>& index_alphabet() {
  static const std::map<std::string_view, int> map = {
      {"[C]", 0},        {"[Ring1]", 1},    {"[Ring2]", 2},
      {"[Branch1]", 3},  {"[=Branch1]", 4}, {"[#Branch1]", 5},
      {"[Branch2]", 6},  {"[=Branch2]", 7}, {"[#Branch2]", 8},
      {"[O]", 9},        {"[N]", 10},       {"[=N]", 11},
      {"[=C]", 12},      {"[#C]", 13},      {"[S]", 14},
      {"[P]", 15},
  };
  return map;
}

// ------------------------------------------------------------------
// Derivation

class Decoder {
 public:
  explicit Decoder(const std::vector<std::string>& tokens)
      : tokens_(tokens) {}

  MolecularGraph run() {
    validate_tokens();
    derive_fragment(0, tokens_.size(), /*attach=*/-1, /*first_ceiling=*/0);
    fill_hydrogens();
    return std::move(graph_);
  }

 private:
  void validate_tokens() {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (!match_atom(tokens_[i]) && !match_struct(tokens_[i])) {
        throw Error(ErrorKind::kUnknownToken, tokens_[i], i);
      }
    }
  }

  int remaining(int atom_idx) const {
    return capacity_[atom_idx] - used_[atom_idx];
  }

  int place_atom(const AtomToken& token) {
    int idx = graph_.add_atom(
        {token.element, token.charge, /*explicit_h=*/0, /*aromatic=*/false});
    capacity_.push_back(bond_capacity(token.element, token.charge));
    used_.push_back(0);
    return idx;
  }

  void connect(int a, int b, int order) {
    graph_.add_bond(a, b,
                    order == 1   ? BondOrder::kSingle
                    : order == 2 ? BondOrder::kDouble
                                 : BondOrder::kTriple);
    used_[a] += order;
    used_[b] += order;
  }

  // Reads the L-symbol index value starting at pos; consumes up to L
  // tokens. Returns nullopt when the stream is exhausted first.
  std::optional<int> read_index(std::size_t& pos, std::size_t end, int len) {
    long value = 0;
    for (int k = 0; k < len; ++k) {
      if (pos >= end) return std::nullopt;
      value = value * 16 + selfies_index_value(tokens_[pos]);
      ++pos;
    }
    return static_cast<int>(value);
  }

  // Derives tokens[begin, end). attach >= 0 makes this a branch rooted at
  // that atom, with the first bond order capped by first_ceiling.
  // Returns the order of the first bond created (0 when none).
  int derive_fragment(std::size_t begin, std::size_t end, int attach,
                      int first_ceiling) {
    int prev = attach;
    bool in_branch = attach >= 0;
    int first_bond_order = 0;
    std::size_t pos = begin;
    while (pos < end) {
      const std::string& token = tokens_[pos];
      if (auto atom = match_atom(token)) {
        ++pos;
        if (prev < 0) {
          prev = place_atom(*atom);
          continue;
        }
        int avail = remaining(prev);
        if (in_branch && first_bond_order == 0) {
          avail = std::min(avail, first_ceiling);
        }
        if (avail <= 0) break;  // saturated chain ends the fragment
        int cap_new = bond_capacity(atom->element, atom->charge);
        int order = std::min({atom->bond_order, avail, cap_new});
        if (order == 0) continue;  // zero-capacity atom: skipped
        int placed = place_atom(*atom);
        connect(prev, placed, order);
        if (in_branch && first_bond_order == 0) first_bond_order = order;
        prev = placed;
        continue;
      }
      auto st = match_struct(token);
      ++pos;
      auto q = read_index(pos, end, st->index_len);
      if (!q.has_value()) break;  // truncated index: fragment ends
      if (st->is_branch) {
        std::size_t branch_len =
            std::min<std::size_t>(*q + 1, end - pos);
        std::size_t branch_end = pos + branch_len;
        if (prev >= 0 && remaining(prev) >= 2) {
          int ceiling = std::min(st->bond_order, remaining(prev) - 1);
          derive_fragment(pos, branch_end, prev, ceiling);
        }
        pos = branch_end;  // consumed either way
      } else {
        if (prev < 0) continue;  // ring before any atom: ignored
        int back = *q + 1;
        int target = std::max(0, prev - back);
        if (target == prev) continue;
        if (graph_.find_bond(prev, target) != nullptr) continue;
        int order = std::min(
            {st->bond_order, remaining(prev), remaining(target)});
        if (order <= 0) continue;
        connect(prev, target, order);
      }
    }
    return first_bond_order;
  }

  void fill_hydrogens() {
    for (int i = 0; i < graph_.atom_count(); ++i) {
      Atom& atom = graph_.atom(i);
      auto target = fill_target(atom.element, atom.formal_charge, used_[i]);
      atom.explicit_h = target.has_value() ? *target - used_[i] : 0;
    }
  }

  const std::vector<std::string>& tokens_;
  MolecularGraph graph_;
  std::vector<int> capacity_;
  std::vector<int> used_;
};

// ------------------------------------------------------------------
// Encoding

class Encoder {
 public:
  explicit Encoder(const MolecularGraph& g) : graph_(g) {}

  SelfiesString run() {
    if (graph_.atom_count() == 0) {
      throw Error(ErrorKind::kEmptyGraph, "cannot encode an empty graph");
    }
    if (!graph_.connected()) {
      throw Error(ErrorKind::kUnsupportedFeature,
                  "disconnected graphs have no SELFIES form");
    }
    for (const Bond& bond : graph_.bonds()) {
      if (bond.order == BondOrder::kAromatic) {
        throw Error(ErrorKind::kUnsupportedFeature,
                    "aromatic bonds have no SELFIES form; kekulize first");
      }
    }
    for (const Atom& atom : graph_.atoms()) {
      if (ElementTable::instance().find(atom.element) == nullptr) {
        throw Error(ErrorKind::kUnsupportedElement, atom.element);
      }
    }
    placement_.assign(graph_.atom_count(), -1);
    is_ring_bond_.assign(graph_.bonds().size(), false);
    visited_.assign(graph_.atom_count(), false);
    classify(0, -1);
    SelfiesString out;
    out.tokens = emit_subtree(0, -1, 1);
    return out;
  }

 private:
  static std::string atom_token(const Atom& atom, int bond_order) {
    std::string body = bond_order == 2 ? "=" : bond_order == 3 ? "#" : "";
    body += atom.element;
    if (atom.formal_charge != 0) {
      body += atom.formal_charge > 0 ? '+' : '-';
      body += static_cast<char>('0' + std::abs(atom.formal_charge));
    }
    return "[" + body + "]";
  }

  // Emits Q as `len` index tokens (most significant first).
  static std::vector<std::string> index_tokens(int q, int len) {
    static const char* digits[16] = {
        "[C]",        "[Ring1]",    "[Ring2]", "[Branch1]",
        "[=Branch1]", "[#Branch1]", "[Branch2]", "[=Branch2]",
        "[#Branch2]", "[O]",        "[N]",     "[=N]",
        "[=C]",       "[#C]",       "[S]",     "[P]"};
    std::vector<std::string> out(len);
    for (int k = len - 1; k >= 0; --k) {
      out[k] = digits[q % 16];
      q /= 16;
    }
    return out;
  }

  static int index_len_for(int q) {
    if (q < 16) return 1;
    if (q < 256) return 2;
    return 3;
  }

  // Pre-pass: split bonds into spanning-tree and ring-closure bonds along
  // the same depth-first order the emission uses.
  void classify(int atom_idx, int via_bond) {
    visited_[atom_idx] = true;
    for (int bidx : graph_.incident(atom_idx)) {
      if (bidx == via_bond || is_ring_bond_[bidx] ||
          tree_bonds_.count(bidx) > 0) {
        continue;
      }
      const Bond& bond = graph_.bonds()[bidx];
      int other = bond.a == atom_idx ? bond.b : bond.a;
      if (visited_[other]) {
        is_ring_bond_[bidx] = true;
      } else {
        tree_bonds_.insert(bidx);
        classify(other, bidx);
      }
    }
  }

  // Depth-first emission. Ring bonds close when their later endpoint is
  // placed; earlier tree children become branches.
  std::vector<std::string> emit_subtree(int atom_idx, int via_bond,
                                        int bond_to_parent) {
    std::vector<std::string> out;
    out.push_back(atom_token(graph_.atom(atom_idx), bond_to_parent));
    placement_[atom_idx] = next_position_++;

    struct Child {
      int bidx;
      int atom;
      int order;
    };
    std::vector<Child> children;
    for (int bidx : graph_.incident(atom_idx)) {
      if (bidx == via_bond) continue;
      const Bond& bond = graph_.bonds()[bidx];
      int other = bond.a == atom_idx ? bond.b : bond.a;
      int order = static_cast<int>(bond_order_value(bond.order));
      if (is_ring_bond_[bidx]) {
        if (placement_[other] < 0) continue;  // closes at the other end
        int back = placement_[atom_idx] - placement_[other];
        if (back - 1 > 4095) {
          throw Error(ErrorKind::kUnsupportedFeature, "ring span too long");
        }
        int len = index_len_for(back - 1);
        std::string prefix = order == 2 ? "=" : order == 3 ? "#" : "";
        out.push_back("[" + prefix + "Ring" + std::to_string(len) + "]");
        for (auto& t : index_tokens(back - 1, len)) {
          out.push_back(std::move(t));
        }
        continue;
      }
      children.push_back({bidx, other, order});
    }

    for (std::size_t c = 0; c < children.size(); ++c) {
      auto sub = emit_subtree(children[c].atom, children[c].bidx,
                              children[c].order);
      if (c + 1 < children.size()) {
        if (static_cast<int>(sub.size()) - 1 > 4095) {
          throw Error(ErrorKind::kUnsupportedFeature, "branch too long");
        }
        int len = index_len_for(static_cast<int>(sub.size()) - 1);
        std::string prefix =
            children[c].order == 2 ? "=" : children[c].order == 3 ? "#" : "";
        out.push_back("[" + prefix + "Branch" + std::to_string(len) + "]");
        for (auto& t : index_tokens(static_cast<int>(sub.size()) - 1, len)) {
          out.push_back(std::move(t));
        }
      }
      for (auto& t : sub) out.push_back(std::move(t));
    }
    return out;
  }

  const MolecularGraph& graph_;
  std::vector<int> placement_;
  std::vector<bool> visited_;
  std::vector<bool> is_ring_bond_;
  std::set<int> tree_bonds_;
  int next_position_ = 0;
};

}  // namespace

int selfies_index_value(std::string_view token) {
  const auto& map = index_alphabet();
  auto it = map.find(token);
  return it == map.end() ? 0 : it->second;
}

bool selfies_token_known(std::string_view token) {
  return match_atom(token).has_value() || match_struct(token).has_value();
}

MolecularGraph decode_selfies(const SelfiesString& s) {
  if (s.tokens.empty()) {
    throw Error(ErrorKind::kEmptyInput, "no tokens to decode");
  }
  return Decoder(s.tokens).run();
}

SelfiesString encode_selfies(const MolecularGraph& g) {
  return Encoder(g).run();
}

}  // namespace biomol

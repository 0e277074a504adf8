#include <doctest.h>

#include <json.hpp>

#include "biomol/canonical.hpp"
#include "biomol/selfies.hpp"
#include "biomol/tensor.hpp"
#include "oracles.hpp"

using namespace biomol;

namespace {

const char* kFluoroHexenol =
    "[C][=C][Branch1][C][F][C][Branch1][C][O][C][C][C]";

std::vector<std::pair<std::string, std::string>> fixture_biomolecules() {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream stream(
      oracle::slurp(std::string(BIOMOL_DATA_DIR) +
                    "/fixtures/biomolecules.jsonl"));
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    out.emplace_back(j.at("kind").get<std::string>(),
                     j.at("value").get<std::string>());
  }
  return out;
}

std::vector<std::string> random_token_pool() {
  return {"[C]",       "[=C]",       "[#C]",      "[N]",        "[=N]",
          "[O]",       "[=O]",       "[S]",       "[P]",        "[F]",
          "[Cl]",      "[Br]",       "[I]",       "[B]",        "[N+1]",
          "[O-1]",     "[C-1]",      "[S+1]",     "[Branch1]",  "[=Branch1]",
          "[#Branch1]","[Branch2]",  "[=Branch2]","[Ring1]",    "[=Ring1]",
          "[Ring2]",   "[Branch3]",  "[Ring3]",   "[Se]",       "[Si]"};
}

// Heavy-atom comparison against the oracle decoder (hydrogen filling is
// checked separately through check_valence).
bool matches_oracle(const SelfiesString& s, const MolecularGraph& decoded) {
  oracle::RefGraph ref = oracle::reference_selfies_decode(s.tokens);
  if (static_cast<int>(ref.atoms.size()) != decoded.atom_count()) return false;
  if (ref.bonds.size() != decoded.bonds().size()) return false;
  for (std::size_t i = 0; i < ref.atoms.size(); ++i) {
    if (ref.atoms[i].element != decoded.atom(static_cast<int>(i)).element ||
        ref.atoms[i].charge !=
            decoded.atom(static_cast<int>(i)).formal_charge) {
      return false;
    }
  }
  for (const auto& bond : ref.bonds) {
    const Bond* found = decoded.find_bond(bond.a, bond.b);
    if (found == nullptr ||
        static_cast<int>(bond_order_value(found->order)) != bond.order) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("parse_selfies splits bracket groups") {
  auto s = parse_selfies("[C][C]");
  REQUIRE(s.tokens.size() == 2);
  CHECK(s.tokens[0] == "[C]");
  CHECK(s.tokens[1] == "[C]");
}

TEST_CASE("parse_selfies on the fluorohexenol fixture yields 12 tokens") {
  auto s = parse_selfies(kFluoroHexenol);
  CHECK(s.tokens.size() == 12);
  CHECK(s.str() == kFluoroHexenol);
}

TEST_CASE("parse_selfies error cases") {
  CHECK_THROWS_AS(parse_selfies("[C][C"), Error);
  CHECK_THROWS_AS(parse_selfies(""), Error);
  CHECK_THROWS_AS(parse_selfies("[C]]"), Error);
  CHECK_THROWS_AS(parse_selfies("C[C]"), Error);
  CHECK_THROWS_AS(parse_selfies("[C]x[C]"), Error);

  try {
    parse_selfies("[C][C");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnbalancedBracket);
    CHECK(e.position() == 3);
  }
  try {
    parse_selfies("x[C]");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kCharacterOutsideBracket);
  }
}

TEST_CASE("parse round-trip reproduces the input exactly") {
  for (const auto& [kind, value] : fixture_biomolecules()) {
    if (kind != "selfies") continue;
    CAPTURE(value);
    CHECK(parse_selfies(value).str() == value);
  }
}

TEST_CASE("decode_selfies basic chains") {
  auto two_carbons = decode_selfies(parse_selfies("[C][C]"));
  REQUIRE(two_carbons.atom_count() == 2);
  REQUIRE(two_carbons.bonds().size() == 1);
  CHECK(two_carbons.bonds()[0].order == BondOrder::kSingle);
  CHECK(two_carbons.atom(0).explicit_h == 3);

  auto ethene = decode_selfies(parse_selfies("[C][=C]"));
  REQUIRE(ethene.bonds().size() == 1);
  CHECK(ethene.bonds()[0].order == BondOrder::kDouble);
  CHECK(ethene.atom(0).explicit_h == 2);
}

TEST_CASE("decode_selfies clips out-of-valence requests") {
  // F has one bond: the triple-bond request collapses to single, and the
  // saturated chain drops the trailing atom.
  auto g = decode_selfies(parse_selfies("[F][#C][F][F]"));
  REQUIRE(g.atom_count() == 3);
  REQUIRE(g.bonds().size() == 2);
  CHECK(g.bonds()[0].order == BondOrder::kSingle);
  CHECK(g.bonds()[1].order == BondOrder::kSingle);
}

TEST_CASE("decode_selfies fluorohexenol has formula C6H11FO") {
  auto g = decode_selfies(parse_selfies(kFluoroHexenol));
  CHECK(g.formula() == "C6H11FO");
  CHECK(check_valence(g).valid());
  CHECK(matches_oracle(parse_selfies(kFluoroHexenol), g));
}

TEST_CASE("decode_selfies ring closure forms a six-ring") {
  auto g = decode_selfies(
      parse_selfies("[C][=C][C][=C][C][=C][Ring1][=Branch1]"));
  CHECK(g.atom_count() == 6);
  CHECK(g.bonds().size() == 6);
  int doubles = 0;
  for (const auto& bond : g.bonds()) {
    doubles += bond.order == BondOrder::kDouble ? 1 : 0;
  }
  CHECK(doubles == 3);
  CHECK(check_valence(g).valid());
}

TEST_CASE("decode_selfies unknown token") {
  CHECK_THROWS_AS(decode_selfies(parse_selfies("[C][Xx]")), Error);
  try {
    decode_selfies(parse_selfies("[C][Xx][C]"));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownToken);
    CHECK(e.position() == 1);
  }
}

TEST_CASE("decode_selfies agrees with the reference decoder on fixtures") {
  for (const auto& [kind, value] : fixture_biomolecules()) {
    if (kind != "selfies") continue;
    CAPTURE(value);
    auto s = parse_selfies(value);
    auto g = decode_selfies(s);
    CHECK(matches_oracle(s, g));
    CHECK(check_valence(g).valid());
  }
}

TEST_CASE("decode_selfies robustness fuzz with oracle agreement") {
  auto pool = random_token_pool();
  SplitMix64 rng(20260808);
  for (int iter = 0; iter < 500; ++iter) {
    SelfiesString s;
    int len = 1 + static_cast<int>(rng.next_u64() % 24);
    for (int i = 0; i < len; ++i) {
      s.tokens.push_back(pool[rng.next_u64() % pool.size()]);
    }
    CAPTURE(s.str());
    CHECK(parse_selfies(s.str()).tokens == s.tokens);  // bracket round-trip
    MolecularGraph g;
    REQUIRE_NOTHROW(g = decode_selfies(s));
    CHECK(check_valence(g).valid());
    CHECK(matches_oracle(s, g));
  }
}

TEST_CASE("encode_selfies round-trips simple graphs") {
  MolecularGraph ethane;
  ethane.add_atom({"C", 0, 3, false});
  ethane.add_atom({"C", 0, 3, false});
  ethane.add_bond(0, 1, BondOrder::kSingle);
  auto tokens = encode_selfies(ethane);
  auto back = decode_selfies(tokens);
  CHECK(canonical_form(back) == canonical_form(ethane));
}

TEST_CASE("encode_selfies round-trips benzene (Kekule form)") {
  MolecularGraph benzene;
  for (int i = 0; i < 6; ++i) benzene.add_atom({"C", 0, 1, false});
  for (int i = 0; i < 6; ++i) {
    benzene.add_bond(i, (i + 1) % 6,
                     i % 2 == 0 ? BondOrder::kDouble : BondOrder::kSingle);
  }
  auto back = decode_selfies(encode_selfies(benzene));
  CHECK(canonical_form(back) == canonical_form(benzene));
  CHECK(oracle::graphs_isomorphic(back, benzene));
}

TEST_CASE("encode_selfies round-trips branched and charged structures") {
  auto g = decode_selfies(
      parse_selfies("[O][=C][Branch1][C][O-1][C][=Branch1][C][=O][C][O]"));
  auto back = decode_selfies(encode_selfies(g));
  CHECK(canonical_form(back) == canonical_form(g));
}

TEST_CASE("encode_selfies round-trips every fixture molecule") {
  for (const auto& [kind, value] : fixture_biomolecules()) {
    if (kind != "selfies") continue;
    CAPTURE(value);
    auto g = decode_selfies(parse_selfies(value));
    auto back = decode_selfies(encode_selfies(g));
    CHECK(canonical_form(back) == canonical_form(g));
  }
}

TEST_CASE("encode_selfies rejects unsupported input") {
  MolecularGraph weird;
  weird.add_atom({"Xx", 0, 0, false});
  CHECK_THROWS_AS(encode_selfies(weird), Error);
  try {
    encode_selfies(weird);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnsupportedElement);
  }
}

TEST_CASE("encode round-trips fuzz-decoded graphs") {
  auto pool = random_token_pool();
  SplitMix64 rng(777);
  int round_trips = 0;
  for (int iter = 0; iter < 200; ++iter) {
    SelfiesString s;
    int len = 1 + static_cast<int>(rng.next_u64() % 30);
    for (int i = 0; i < len; ++i) {
      s.tokens.push_back(pool[rng.next_u64() % pool.size()]);
    }
    auto g = decode_selfies(s);
    // structural tokens can swallow the whole stream; nothing to encode
    if (g.atom_count() == 0) continue;
    CAPTURE(s.str());
    auto back = decode_selfies(encode_selfies(g));
    CHECK(canonical_form(back) == canonical_form(g));
    ++round_trips;
  }
  CHECK(round_trips > 150);
}

TEST_CASE("decode handles deep branch nesting and long rings") {
  const char* text =
      "[C][C][Branch2][C][=Branch1][C][C][C][C][C][C][C][C][C][C][C][C][C]"
      "[C][C][Ring1][=N]";
  auto s = parse_selfies(text);
  auto g = decode_selfies(s);
  CHECK(g.atom_count() > 2);
  CHECK(check_valence(g).valid());
  CHECK(matches_oracle(s, g));
}

#include <doctest.h>

#include <json.hpp>
#include <set>

#include "biomol/vocab.hpp"
#include "oracles.hpp"

using namespace biomol;

TEST_CASE("default vocabulary structure") {
  auto vocab = Vocabulary::default_vocabulary();
  CHECK(vocab.size() > 8 + 20);
  for (const char* special : kSpecialTokens) {
    CHECK(vocab.id_of(special).has_value());
  }
  for (char residue : kResidueAlphabet) {
    CHECK(vocab.id_of(std::string("<p>") + residue).has_value());
  }
  CHECK(vocab.id_of("[C]").has_value());
  CHECK(vocab.id_of("[=Branch1]").has_value());
  CHECK(vocab.id_of("[O-1]").has_value());
}

TEST_CASE("token classes are pairwise disjoint across the vocabulary") {
  auto vocab = Vocabulary::default_vocabulary();
  std::set<std::string> seen;
  for (TokenId id = 0; id < static_cast<TokenId>(vocab.size()); ++id) {
    const std::string& token = vocab.token_of(id);
    CHECK(seen.insert(token).second);  // bijective id<->token
    switch (vocab.class_of(id)) {
      case TokenClass::kSpecial:
        CHECK(token.front() == '<');
        CHECK(token.substr(0, 3) != "<p>");
        break;
      case TokenClass::kProtein:
        CHECK(token.substr(0, 3) == "<p>");
        break;
      case TokenClass::kMolecule:
        CHECK(token.front() == '[');
        break;
    }
  }
}

TEST_CASE("tokenize_molecule maps one id per bracket group") {
  auto vocab = Vocabulary::default_vocabulary();
  auto ids = vocab.tokenize_molecule(parse_selfies("[C][C]"));
  REQUIRE(ids.size() == 2);
  CHECK(ids[0] == ids[1]);
  CHECK(ids[0] == *vocab.id_of("[C]"));
}

TEST_CASE("fixture molecule tokenizes to one id per bracket group") {
  auto vocab = Vocabulary::default_vocabulary();
  std::string value =
      "[C][C][C][C][S][P][=Branch1][C][=O][Branch1][=Branch1][S][C][C][C]"
      "[C][S][C][C][C][C]";
  auto s = parse_selfies(value);
  CHECK(s.tokens.size() == 21);
  auto ids = vocab.tokenize_molecule(s);
  CHECK(ids.size() == s.tokens.size());
  CHECK(vocab.detokenize(ids) == value);
}

TEST_CASE("tokenize_molecule rejects unknown tokens in closed mode") {
  auto vocab = Vocabulary::default_vocabulary();
  SelfiesString s;
  s.tokens = {"[C]", "[Xx]"};
  try {
    auto ids = vocab.tokenize_molecule(s);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOutOfVocabulary);
    CHECK(e.position() == 1);
  }
}

TEST_CASE("extend mode appends new molecule tokens") {
  auto vocab = Vocabulary::default_vocabulary();
  SelfiesString s;
  s.tokens = {"[C]", "[Zz]"};
  auto before = vocab.size();
  auto ids = vocab.tokenize_molecule(s, /*extend=*/true);
  CHECK(vocab.size() == before + 1);
  CHECK(vocab.token_of(ids[1]) == "[Zz]");
  // second pass reuses the id
  CHECK(vocab.tokenize_molecule(s, true) == ids);
}

TEST_CASE("tokenize_protein maps residues through <p> prefixes") {
  auto vocab = Vocabulary::default_vocabulary();
  auto single = vocab.tokenize_protein(ProteinSequence("C"));
  REQUIRE(single.size() == 1);
  CHECK(single[0] == *vocab.id_of("<p>C"));

  auto ids = vocab.tokenize_protein(ProteinSequence("MKV"));
  CHECK(ids.size() == 3);
  CHECK(vocab.detokenize(ids) == "MKV");
}

TEST_CASE("protein round-trip on fixture sequences") {
  auto vocab = Vocabulary::default_vocabulary();
  std::istringstream stream(oracle::slurp(
      std::string(BIOMOL_DATA_DIR) + "/fixtures/biomolecules.jsonl"));
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    if (j.at("kind") != "fasta") continue;
    std::string value = j.at("value");
    CAPTURE(value);
    ProteinSequence p(value);
    CHECK(vocab.detokenize(vocab.tokenize_protein(p)) == value);
  }
}

TEST_CASE("detokenize rejects unknown ids") {
  auto vocab = Vocabulary::default_vocabulary();
  CHECK_THROWS_AS(vocab.detokenize({999999}), Error);
  try {
    vocab.detokenize({999999});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownId);
  }
}

TEST_CASE("vocabulary save/load keeps ids stable") {
  auto vocab = Vocabulary::default_vocabulary();
  auto loaded = Vocabulary::load(vocab.save());
  REQUIRE(loaded.size() == vocab.size());
  for (TokenId id = 0; id < static_cast<TokenId>(vocab.size()); ++id) {
    CHECK(loaded.token_of(id) == vocab.token_of(id));
    CHECK(loaded.class_of(id) == vocab.class_of(id));
  }
  CHECK_THROWS_AS(Vocabulary::load("[C]\n[C]\n"), Error);
}

TEST_CASE("form_input molecule layout") {
  auto input = form_input(EntityKind::kMolecule, {"[C]"}, true, 8);
  REQUIRE(input.segments.size() == 6);
  CHECK(input.segments[0].kind == SegmentKind::kSpecial);
  CHECK(input.segments[0].payload == "<MOL>");
  CHECK(input.segments[1].kind == SegmentKind::kFeatureSlot);
  CHECK(input.segments[1].slot_size == 9);
  CHECK(input.segments[2].payload == "</MOL>");
  CHECK(input.segments[3].payload == "<SELFIES>");
  CHECK(input.segments[4].kind == SegmentKind::kMoleculeToken);
  CHECK(input.segments[4].payload == "[C]");
  CHECK(input.segments[5].payload == "</SELFIES>");
}

TEST_CASE("form_input protein without features omits the feature block") {
  auto input = form_input(EntityKind::kProtein, {"<p>M", "<p>K"}, false, 0);
  REQUIRE(input.segments.size() == 4);
  CHECK(input.segments[0].payload == "<FASTA>");
  CHECK(input.segments[1].payload == "<p>M");
  CHECK(input.segments[2].payload == "<p>K");
  CHECK(input.segments[3].payload == "</FASTA>");
}

TEST_CASE("form_input rejects n_q = 0 with features") {
  CHECK_THROWS_AS(form_input(EntityKind::kMolecule, {"[C]"}, true, 0),
                  Error);
}

TEST_CASE("FormedInput serialization is byte-deterministic") {
  auto a = form_input(EntityKind::kMolecule, {"[C]", "[=C]"}, true, 4);
  auto b = form_input(EntityKind::kMolecule, {"[C]", "[=C]"}, true, 4);
  CHECK(a.to_jsonl() == b.to_jsonl());
  CHECK(a.to_jsonl().find("\"kind\":\"feature-slot\",\"payload\":5") !=
        std::string::npos);
}

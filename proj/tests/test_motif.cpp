#include <doctest.h>

#include <algorithm>
#include <json.hpp>
#include <numeric>

#include "biomol/motif.hpp"
#include "biomol/smiles.hpp"
#include "oracles.hpp"

using namespace biomol;

TEST_CASE("fcfp rejects empty graphs and bad parameters") {
  MolecularGraph empty;
  CHECK_THROWS_AS(fcfp(empty), Error);
  try {
    fcfp(empty);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyGraph);
  }
}

TEST_CASE("fcfp is deterministic and permutation invariant") {
  auto g = parse_smiles("CC(=O)OC1=CC=CC=C1C(=O)O");
  auto fp = fcfp(g);
  CHECK(fp.size() == 1024);
  CHECK(fcfp(g).bits == fp.bits);

  SplitMix64 rng(5);
  std::vector<int> order(g.atom_count());
  std::iota(order.begin(), order.end(), 0);
  for (int iter = 0; iter < 20; ++iter) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.next_u64() % i]);
    }
    CHECK(fcfp(oracle::permute_graph(g, order)).bits == fp.bits);
  }
}

TEST_CASE("fcfp permutation invariance exhaustive for small graphs") {
  for (const char* text : {"CCO", "CC(=O)O", "c1cc[nH]c1", "CC(C)C"}) {
    CAPTURE(text);
    auto g = parse_smiles(text);
    auto fp = fcfp(g);
    std::vector<int> order(g.atom_count());
    std::iota(order.begin(), order.end(), 0);
    do {
      CHECK(fcfp(oracle::permute_graph(g, order)).bits == fp.bits);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("benzene sets at most radius+1 distinct bits") {
  // every atom shares one environment per round
  auto benzene = parse_smiles("c1ccccc1");
  CHECK(fcfp(benzene, 2, 1024).popcount() <= 3);
  CHECK(fcfp(benzene, 0, 1024).popcount() == 1);
  CHECK(fcfp(benzene, 5, 1024).popcount() <= 6);
}

TEST_CASE("pharmacophore features drive the fingerprint") {
  // donor/acceptor: O with H vs ether O
  auto ethanol = fcfp(parse_smiles("CCO"));
  auto ether = fcfp(parse_smiles("COC"));
  CHECK(ethanol.bits != ether.bits);

  // charge flips a feature bit
  auto acid = fcfp(parse_smiles("CC(=O)O"));
  auto carboxylate = fcfp(parse_smiles("CC(=O)[O-]"));
  CHECK(acid.bits != carboxylate.bits);

  // halogens hash apart from carbon
  CHECK(fcfp(parse_smiles("CCl")).bits != fcfp(parse_smiles("CC")).bits);
}

TEST_CASE("fcfp respects radius and n_bits arguments") {
  auto g = parse_smiles("CCO");
  CHECK(fcfp(g, 2, 64).size() == 64);
  CHECK(fcfp(g, 0, 1024).popcount() <= 3);  // three distinct round-0 atoms
  CHECK_THROWS_AS(fcfp(g, -1, 1024), Error);
  CHECK_THROWS_AS(fcfp(g, 2, 0), Error);
}

TEST_CASE("hex encoding is stable") {
  MotifVector v;
  v.bits.assign(8, 0);
  v.bits[0] = 1;
  v.bits[5] = 1;
  CHECK(v.hex() == "84");
}

TEST_CASE("protein_motif_vector substring semantics") {
  MotifDictionary dict({"KV", "AA"});
  auto bits = protein_motif_vector(ProteinSequence("MKVL"), dict);
  REQUIRE(bits.size() == 2);
  CHECK(bits.bits[0] == 1);
  CHECK(bits.bits[1] == 0);

  MotifDictionary full({"MKVL"});
  CHECK(protein_motif_vector(ProteinSequence("MKVL"), full).bits[0] == 1);
}

TEST_CASE("protein_motif_vector equals a naive scan oracle") {
  MotifDictionary dict = MotifDictionary::load(
      oracle::slurp(std::string(BIOMOL_DATA_DIR) + "/protein_motifs.txt"));
  SplitMix64 rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    std::string sequence;
    int len = 5 + static_cast<int>(rng.next_u64() % 40);
    for (int i = 0; i < len; ++i) {
      sequence += kResidueAlphabet[rng.next_u64() % 20];
    }
    ProteinSequence p(sequence);
    auto bits = protein_motif_vector(p, dict);
    for (std::size_t m = 0; m < dict.size(); ++m) {
      // naive O(n*m) scan
      bool found = false;
      const std::string& motif = dict[m];
      for (std::size_t start = 0;
           start + motif.size() <= sequence.size() && !found; ++start) {
        bool all = true;
        for (std::size_t k = 0; k < motif.size(); ++k) {
          if (sequence[start + k] != motif[k]) {
            all = false;
            break;
          }
        }
        found = all;
      }
      CHECK(bits.bits[m] == (found ? 1 : 0));
    }
  }
}

TEST_CASE("motif_vector monotone under sequence extension") {
  MotifDictionary dict({"DEAD", "RGD", "KV"});
  SplitMix64 rng(13);
  for (int iter = 0; iter < 30; ++iter) {
    std::string base;
    int len = 4 + static_cast<int>(rng.next_u64() % 20);
    for (int i = 0; i < len; ++i) {
      base += kResidueAlphabet[rng.next_u64() % 20];
    }
    auto before = protein_motif_vector(ProteinSequence(base), dict);
    std::string extended =
        base + std::string(1, kResidueAlphabet[rng.next_u64() % 20]);
    auto after = protein_motif_vector(ProteinSequence(extended), dict);
    for (std::size_t m = 0; m < dict.size(); ++m) {
      if (before.bits[m]) CHECK(after.bits[m]);
    }
  }
}

TEST_CASE("motif_prompt basics") {
  Matrix m(4, 3);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      m(r, c) = static_cast<double>(10 * r + c);
    }
  }
  MotifVector zeros;
  zeros.bits.assign(4, 0);
  CHECK(motif_prompt(zeros, m) == Vector{0.0, 0.0, 0.0});

  MotifVector one_hot;
  one_hot.bits.assign(4, 0);
  one_hot.bits[2] = 1;
  CHECK(motif_prompt(one_hot, m) == Vector{20.0, 21.0, 22.0});

  MotifVector two;
  two.bits.assign(4, 0);
  two.bits[1] = 1;
  two.bits[3] = 1;
  auto prompt = motif_prompt(two, m);
  CHECK(prompt[0] == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(prompt[1] == doctest::Approx(42.0).epsilon(1e-12));

  MotifVector wrong;
  wrong.bits.assign(3, 0);
  CHECK_THROWS_AS(motif_prompt(wrong, m), Error);
}

TEST_CASE("motif_prompt matches a dense matrix-multiply oracle") {
  SplitMix64 rng(17);
  for (int iter = 0; iter < 100; ++iter) {
    std::size_t rows = 1 + rng.next_u64() % 40;
    std::size_t cols = 1 + rng.next_u64() % 12;
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.next_uniform(-2.0, 2.0);
    MotifVector t;
    t.bits.resize(rows);
    for (auto& bit : t.bits) bit = rng.next_u64() % 2;

    auto prompt = motif_prompt(t, m);
    // dense T * M with an explicit double conversion of the indicator
    for (std::size_t c = 0; c < cols; ++c) {
      double expected = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        expected += static_cast<double>(t.bits[r]) * m(r, c);
      }
      CHECK(prompt[c] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("motif_prompt linearity over disjoint indicators") {
  SplitMix64 rng(19);
  Matrix m(30, 8);
  for (double& v : m.data()) v = rng.next_uniform(-1.0, 1.0);
  for (int iter = 0; iter < 20; ++iter) {
    MotifVector t1, t2, combined;
    t1.bits.assign(30, 0);
    t2.bits.assign(30, 0);
    combined.bits.assign(30, 0);
    for (std::size_t i = 0; i < 30; ++i) {
      switch (rng.next_u64() % 3) {
        case 0:
          t1.bits[i] = combined.bits[i] = 1;
          break;
        case 1:
          t2.bits[i] = combined.bits[i] = 1;
          break;
        default:
          break;
      }
    }
    auto p1 = motif_prompt(t1, m);
    auto p2 = motif_prompt(t2, m);
    auto pc = motif_prompt(combined, m);
    for (std::size_t c = 0; c < 8; ++c) {
      CHECK(pc[c] == doctest::Approx(p1[c] + p2[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_motif_dictionary keeps motifs seen at least twice") {
  std::vector<MotifAnnotation> annotated = {
      {"AARGDAA", {"RGD"}},
      {"MRGDKV", {"RGD", "KV"}},
  };
  auto dict = build_motif_dictionary(annotated, 2);
  REQUIRE(dict.size() == 1);
  CHECK(dict[0] == "RGD");

  auto strict = build_motif_dictionary({{"AARGDAA", {"RGD"}}}, 2);
  CHECK(strict.size() == 0);
}

TEST_CASE("build_motif_dictionary reproduces the bundled dictionary") {
  std::vector<MotifAnnotation> annotated;
  std::istringstream stream(oracle::slurp(
      std::string(BIOMOL_DATA_DIR) + "/fixtures/motif_annotations.jsonl"));
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    MotifAnnotation record;
    record.sequence = j.at("sequence").get<std::string>();
    for (const auto& span : j.at("motifs")) {
      record.motif_spans.push_back(span.get<std::string>());
      // spans must actually occur in the sequence
      CHECK(record.sequence.find(record.motif_spans.back()) !=
            std::string::npos);
    }
    annotated.push_back(std::move(record));
  }
  auto built = build_motif_dictionary(annotated, 2);
  auto bundled = MotifDictionary::load(
      oracle::slurp(std::string(BIOMOL_DATA_DIR) + "/protein_motifs.txt"));
  REQUIRE(built.size() == bundled.size());
  for (std::size_t i = 0; i < built.size(); ++i) {
    CHECK(built[i] == bundled[i]);
  }
}

TEST_CASE("dictionary validation") {
  CHECK_THROWS_AS(MotifDictionary({"RGD", "RGD"}), Error);
  CHECK_THROWS_AS(MotifDictionary({""}), Error);
  CHECK_THROWS_AS(MotifDictionary({"RGZ"}), Error);
  auto dict = MotifDictionary({"RGD"});
  CHECK(dict.save() == "RGD\n");
}

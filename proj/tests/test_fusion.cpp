#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "biomol/fusion.hpp"
#include "biomol/motif.hpp"
#include "biomol/selfies.hpp"
#include "biomol/smiles.hpp"
#include "oracles.hpp"

using namespace biomol;

namespace {

// Deterministic synthetic geometry for coordinate-needing tests.
void attach_coordinates(MolecularGraph& g) {
  std::vector<Point3> coords;
  for (int i = 0; i < g.atom_count(); ++i) {
    coords.push_back({1.5 * i, 0.7 * (i % 2), 0.3 * ((i * 7) % 5)});
  }
  g.set_coordinates(coords);
}

double max_abs_diff(const Matrix& a, const oracle::dense::Rows& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      worst = std::max(worst, std::abs(a(r, c) - b[r][c]));
    }
  }
  return worst;
}

double max_rel_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    double denom = std::max(1.0, std::abs(b.data()[i]));
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]) / denom);
  }
  return worst;
}

}  // namespace

TEST_CASE("featurize mol2d single atom") {
  MolecularGraph g;
  g.add_atom({"C", 0, 4, false});
  auto e = featurize(g, ModalityKind::kMol2d);
  REQUIRE(e.values.rows() == 1);
  REQUIRE(e.values.cols() == modality_dim(ModalityKind::kMol2d));
  auto carbon = *ElementTable::instance().index_of("C");
  for (int c = 0; c < ElementTable::core_size(); ++c) {
    CHECK(e.values(0, c) == (c == carbon ? 1.0 : 0.0));
  }
  CHECK(e.values(0, ElementTable::core_size()) == 0.0);  // degree
}

TEST_CASE("featurize prot1d distinct one-hots") {
  auto e = featurize(ProteinSequence("MK"), ModalityKind::kProt1d);
  REQUIRE(e.values.rows() == 2);
  REQUIRE(e.values.cols() == 21);
  bool differ = false;
  for (std::size_t c = 0; c < 20; ++c) {
    differ = differ || e.values(0, c) != e.values(1, c);
  }
  CHECK(differ);
  CHECK(e.values(0, 20) == 0.0);
  CHECK(e.values(1, 20) == 1.0);
}

TEST_CASE("featurize 3d kinds demand coordinates") {
  auto g = parse_smiles("CCO");
  CHECK_THROWS_AS(featurize(g, ModalityKind::kMol3d), Error);
  try {
    featurize(g, ModalityKind::kMol3d);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMissingCoordinates);
  }
  attach_coordinates(g);
  auto e = featurize(g, ModalityKind::kMol3d);
  CHECK(e.values.cols() == modality_dim(ModalityKind::kMol3d));
}

TEST_CASE("featurize prot3d uses CA distances") {
  ProteinSequence seq("MKV");
  std::string backbone =
      "0 0 0  1 0 0  0 1 0  0 0 1\n"
      "3 0 0  4 0 0  3 1 0  3 0 1\n"
      "9 0 0 10 0 0  9 1 0  9 0 1\n";
  auto structure = load_backbone(seq, backbone);
  auto e = featurize(structure, ModalityKind::kProt3d);
  REQUIRE(e.values.cols() == 24);
  // CA atoms at x = 0, 3, 9: residue 0 sees distances 3 and 9
  CHECK(e.values(0, 21) == doctest::Approx(6.0));   // mean
  CHECK(e.values(0, 22) == doctest::Approx(3.0));   // min
  CHECK(e.values(0, 23) == doctest::Approx(9.0));   // max
}

TEST_CASE("project_concat doubles the token count") {
  auto g = parse_smiles("CC(C)CO");  // 5 heavy atoms
  attach_coordinates(g);
  auto weights = FusionWeights::seeded({.d = 16}, 1);
  auto h = project_concat(featurize(g, ModalityKind::kMol2d),
                          featurize(g, ModalityKind::kMol3d), weights);
  CHECK(h.rows() == 10);
  CHECK(h.cols() == 16);
}

TEST_CASE("project_concat rejects mixed entities") {
  auto g = parse_smiles("CC");
  auto weights = FusionWeights::seeded({.d = 16}, 1);
  auto mol = featurize(g, ModalityKind::kMol2d);
  auto prot = featurize(ProteinSequence("MK"), ModalityKind::kProt1d);
  CHECK_THROWS_AS(project_concat(mol, prot, weights), Error);
}

TEST_CASE("constant rows collapse to the MLP bias under LayerNorm") {
  FusionConfig config{.d = 4};
  auto w = FusionWeights::seeded(config, 3);
  const int dim = modality_dim(ModalityKind::kProt1d);
  // unit-gain zero-bias LayerNorm, identity-shaped MLP
  w.modality_ln[2] = {Vector(dim, 1.0), Vector(dim, 0.0)};
  MlpParams identity;
  identity.w1 = Matrix(dim, dim);
  for (int i = 0; i < dim; ++i) identity.w1(i, i) = 1.0;
  identity.b1 = Vector(dim, 0.0);
  identity.w2 = Matrix(dim, 4);
  identity.b2 = {0.5, -1.0, 2.0, 0.25};
  w.modality_mlp[2] = identity;

  ModalityEmbedding constant{ModalityKind::kProt1d, Matrix(3, dim, 3.7)};
  auto h = modality_transform(constant, w);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    CHECK(h(r, 0) == doctest::Approx(0.5));
    CHECK(h(r, 1) == doctest::Approx(-1.0));
    CHECK(h(r, 2) == doctest::Approx(2.0));
    CHECK(h(r, 3) == doctest::Approx(0.25));
  }
}

TEST_CASE("project_concat matches the dense oracle to 1e-10") {
  auto g = parse_smiles("CC(=O)OC1=CC=CC=C1C(=O)O");
  attach_coordinates(g);
  auto w = FusionWeights::seeded({.d = 16}, 77);
  auto a = featurize(g, ModalityKind::kMol2d);
  auto b = featurize(g, ModalityKind::kMol3d);
  auto h = project_concat(a, b, w);

  auto oracle_a = oracle::dense::modality_transform(
      oracle::dense::to_rows(a.values), w.modality_ln[0], w.modality_mlp[0]);
  auto oracle_b = oracle::dense::modality_transform(
      oracle::dense::to_rows(b.values), w.modality_ln[1], w.modality_mlp[1]);
  oracle::dense::Rows stacked = oracle_a;
  stacked.insert(stacked.end(), oracle_b.begin(), oracle_b.end());
  CHECK(max_abs_diff(h, stacked) < 1e-10);
}

TEST_CASE("fuse output shape is (1+n_q) x d") {
  SplitMix64 rng(31);
  for (int iter = 0; iter < 10; ++iter) {
    int n_q = 1 + static_cast<int>(rng.next_u64() % 12);
    int d = 4 * (1 + static_cast<int>(rng.next_u64() % 6));
    int tokens = 1 + static_cast<int>(rng.next_u64() % 20);
    FusionConfig config{.d = d, .n_heads = 4, .n_layers = 2,
                        .d_ff = 2 * d, .n_q = n_q};
    auto w = FusionWeights::seeded(config, rng.next_u64());
    Matrix h(tokens, d);
    for (double& v : h.data()) v = rng.next_uniform(-1.0, 1.0);
    Vector prompt(d);
    for (double& v : prompt) v = rng.next_uniform(-1.0, 1.0);
    auto z = fuse(h, prompt, w);
    CHECK(z.rows() == static_cast<std::size_t>(1 + n_q));
    CHECK(z.cols() == static_cast<std::size_t>(d));
    CHECK(z.all_finite());
  }
}

TEST_CASE("fuse is invariant under encoder-row permutation") {
  SplitMix64 rng(37);
  FusionConfig config{.d = 16, .n_q = 8};
  auto w = FusionWeights::seeded(config, 5);
  Matrix h(9, 16);
  for (double& v : h.data()) v = rng.next_uniform(-1.0, 1.0);
  Vector prompt(16);
  for (double& v : prompt) v = rng.next_uniform(-1.0, 1.0);
  auto z = fuse(h, prompt, w);

  std::vector<int> order(h.rows());
  std::iota(order.begin(), order.end(), 0);
  for (int iter = 0; iter < 5; ++iter) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.next_u64() % i]);
    }
    Matrix permuted(h.rows(), h.cols());
    for (std::size_t r = 0; r < h.rows(); ++r) {
      permuted.set_row(r, h.row(order[r]));
    }
    auto z2 = fuse(permuted, prompt, w);
    CHECK(max_rel_diff(z2, z) < 1e-6);
  }
}

TEST_CASE("attention rows are probability distributions") {
  SplitMix64 rng(41);
  FusionConfig config{.d = 16, .n_q = 4};
  auto w = FusionWeights::seeded(config, 9);
  Matrix h(7, 16);
  for (double& v : h.data()) v = rng.next_uniform(-2.0, 2.0);
  Vector prompt(16);
  for (double& v : prompt) v = rng.next_uniform(-2.0, 2.0);
  FusionTrace trace;
  fuse(h, prompt, w, &trace);
  CHECK(!trace.attention_rows.empty());
  for (const auto& scores : trace.attention_rows) {
    for (std::size_t r = 0; r < scores.rows(); ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < scores.cols(); ++c) {
        CHECK(scores(r, c) >= 0.0);
        sum += scores(r, c);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("fuse is bit-deterministic") {
  SplitMix64 rng(43);
  FusionConfig config{.d = 8, .n_q = 3};
  auto w = FusionWeights::seeded(config, 4);
  Matrix h(5, 8);
  for (double& v : h.data()) v = rng.next_uniform(-1.0, 1.0);
  Vector prompt(8);
  for (double& v : prompt) v = rng.next_uniform(-1.0, 1.0);
  auto z1 = fuse(h, prompt, w);
  auto z2 = fuse(h, prompt, w);
  CHECK(z1.data() == z2.data());  // exact equality
}

TEST_CASE("fuse agrees with the dense-math oracle") {
  SplitMix64 rng(47);
  for (int iter = 0; iter < 3; ++iter) {
    int d = 8 * (1 + static_cast<int>(rng.next_u64() % 2));
    FusionConfig config{.d = d, .n_heads = 4, .n_layers = 2,
                        .d_ff = 2 * d, .n_q = 5};
    auto w = FusionWeights::seeded(config, rng.next_u64());
    Matrix h(6, d);
    for (double& v : h.data()) v = rng.next_uniform(-1.0, 1.0);
    Vector prompt(d);
    for (double& v : prompt) v = rng.next_uniform(-1.0, 1.0);
    auto z = fuse(h, prompt, w);
    auto expected = oracle::dense::fuse(oracle::dense::to_rows(h), prompt, w);
    CHECK(max_abs_diff(z, expected) < 1e-10);
  }
}

TEST_CASE("full molecule pipeline produces stable Z") {
  auto g = decode_selfies(
      parse_selfies("[C][=C][Branch1][C][F][C][Branch1][C][O][C][C][C]"));
  attach_coordinates(g);
  FusionConfig config{.d = 16, .n_q = 8};
  auto w = FusionWeights::seeded(config, 42);
  auto h = project_concat(featurize(g, ModalityKind::kMol2d),
                          featurize(g, ModalityKind::kMol3d), w);
  auto prompt = motif_prompt(fcfp(g), w.motif_mol);
  auto z = fuse(h, prompt, w);
  CHECK(z.rows() == 9);
  CHECK(z.cols() == 16);
  auto expected = oracle::dense::fuse(oracle::dense::to_rows(h), prompt, w);
  CHECK(max_abs_diff(z, expected) < 1e-10);
}

TEST_CASE("weights survive an archive round-trip") {
  FusionConfig config{.d = 8, .n_heads = 2, .n_layers = 1, .d_ff = 16,
                      .n_q = 2, .n_protein_motifs = 8};
  auto w = FusionWeights::seeded(config, 11);
  TensorArchive archive;
  w.save(archive);
  std::ostringstream buffer;
  archive.write(buffer);
  std::istringstream input(buffer.str());
  auto reloaded = FusionWeights::load(TensorArchive::read(input));

  SplitMix64 rng(53);
  Matrix h(4, 8);
  for (double& v : h.data()) v = rng.next_uniform(-1.0, 1.0);
  Vector prompt(8);
  for (double& v : prompt) v = rng.next_uniform(-1.0, 1.0);
  CHECK(fuse(h, prompt, w).data() == fuse(h, prompt, reloaded).data());
}

TEST_CASE("tensor archive round-trip and malformed input") {
  TensorArchive archive;
  Matrix m(2, 3);
  for (std::size_t i = 0; i < 6; ++i) m.data()[i] = 0.5 * i - 1.0;
  archive.put("a.b", m);
  archive.put("vec", Vector{1.0, 2.5});
  std::ostringstream buffer;
  archive.write(buffer);
  std::istringstream input(buffer.str());
  auto reread = TensorArchive::read(input);
  CHECK(reread.matrix("a.b").data() == m.data());
  CHECK(reread.vector("vec") == Vector{1.0, 2.5});
  CHECK_THROWS_AS(reread.matrix("vec"), Error);   // wrong rank
  CHECK_THROWS_AS(reread.vector("nope"), Error);  // absent

  std::istringstream bad_header("nonsense a 2 2 2\n1 2 3 4\n");
  CHECK_THROWS_AS(TensorArchive::read(bad_header), Error);
  std::istringstream short_values("tensor t 2 2 2\n1 2 3\n");
  CHECK_THROWS_AS(TensorArchive::read(short_values), Error);
  std::istringstream extra_values("tensor t 1 2\n1 2 3\n");
  CHECK_THROWS_AS(TensorArchive::read(extra_values), Error);
}

TEST_CASE("fuse validates inputs") {
  auto w = FusionWeights::seeded({.d = 8, .n_q = 2}, 1);
  Matrix h(3, 8);
  Vector prompt(8, 0.0);
  CHECK_THROWS_AS(fuse(Matrix(3, 7), prompt, w), Error);
  CHECK_THROWS_AS(fuse(h, Vector(7, 0.0), w), Error);

  auto broken = w;
  broken.queries(0, 0) = std::nan("");
  try {
    fuse(h, prompt, broken);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonFiniteWeights);
  }
}

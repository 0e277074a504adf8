//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace biomol {

namespace {

constexpr double kLayerNormEpsilon = 1e-5;

double gelu(double x) {
  return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)));
}

Vector layer_norm_row(const Vector& x, const LayerNormParams& p) {
  const std::size_t d = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(d);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(d);
  const double denom = std::sqrt(var + kLayerNormEpsilon);
  Vector out(d);
  for (std::size_t i = 0; i < d; ++i) {
    out[i] = (x[i] - mean) / denom * p.gain[i] + p.bias[i];
  }
  return out;
}

Matrix layer_norm(const Matrix& x, const LayerNormParams& p) {
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    out.set_row(r, layer_norm_row(x.row(r), p));
  }
  return out;
}

// y = x * w + b, sequential accumulation.
Matrix linear(const Matrix& x, const Matrix& w, const Vector& b) {
  if (x.cols() != w.rows() || w.cols() != b.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "linear layer shape");
  }
  Matrix y(x.rows(), w.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < w.cols(); ++c) {
      double acc = b[c];
      for (std::size_t k = 0; k < w.rows(); ++k) acc += x(r, k) * w(k, c);
      y(r, c) = acc;
    }
  }
  return y;
}

Matrix mlp(const Matrix& x, const MlpParams& p) {
  Matrix hidden = linear(x, p.w1, p.b1);
  for (double& v : hidden.data()) v = gelu(v);
  return linear(hidden, p.w2, p.b2);
}

void softmax_row_inplace(Matrix& m, std::size_t row) {
  double max_v = m(row, 0);
  for (std::size_t c = 1; c < m.cols(); ++c) max_v = std::max(max_v, m(row, c));
  double sum = 0.0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    m(row, c) = std::exp(m(row, c) - max_v);
    sum += m(row, c);
  }
  for (std::size_t c = 0; c < m.cols(); ++c) m(row, c) /= sum;
}

// Multi-head attention: queries from `q_input`, keys/values from
// `kv_input`. Heads are contiguous column slices; accumulation is
// sequential over heads for reproducibility.
Matrix attention(const Matrix& q_input, const Matrix& kv_input,
                 const AttentionParams& p, int n_heads, FusionTrace* trace) {
  const std::size_t d = p.wq.cols();
  if (d % n_heads != 0) {
    throw Error(ErrorKind::kDimensionMismatch,
                "model width not divisible by head count");
  }
  const std::size_t d_head = d / n_heads;
  Matrix q = linear(q_input, p.wq, p.bq);
  Matrix k = linear(kv_input, p.wk, p.bk);
  Matrix v = linear(kv_input, p.wv, p.bv);

  Matrix mixed(q.rows(), d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_head));
  for (int h = 0; h < n_heads; ++h) {
    const std::size_t off = h * d_head;
    Matrix scores(q.rows(), k.rows());
    for (std::size_t i = 0; i < q.rows(); ++i) {
      for (std::size_t j = 0; j < k.rows(); ++j) {
        double dot = 0.0;
        for (std::size_t c = 0; c < d_head; ++c) {
          dot += q(i, off + c) * k(j, off + c);
        }
        scores(i, j) = dot * scale;
      }
      softmax_row_inplace(scores, i);
    }
    if (trace != nullptr) trace->attention_rows.push_back(scores);
    for (std::size_t i = 0; i < q.rows(); ++i) {
      for (std::size_t c = 0; c < d_head; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k.rows(); ++j) {
          acc += scores(i, j) * v(j, off + c);
        }
        mixed(i, off + c) = acc;
      }
    }
  }
  return linear(mixed, p.wo, p.bo);
}

void add_inplace(Matrix& x, const Matrix& delta) {
  for (std::size_t i = 0; i < x.data().size(); ++i) {
    x.data()[i] += delta.data()[i];
  }
}

Matrix distance_summary(const std::vector<std::array<double, 3>>& points) {
  const std::size_t n = points.size();
  Matrix summary(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    double min_d = 0.0;
    double max_d = 0.0;
    bool first = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double dx = points[i][0] - points[j][0];
      double dy = points[i][1] - points[j][1];
      double dz = points[i][2] - points[j][2];
      double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
      sum += dist;
      min_d = first ? dist : std::min(min_d, dist);
      max_d = first ? dist : std::max(max_d, dist);
      first = false;
    }
    summary(i, 0) = n > 1 ? sum / static_cast<double>(n - 1) : 0.0;
    summary(i, 1) = min_d;
    summary(i, 2) = max_d;
  }
  return summary;
}

Matrix mol_base_features(const MolecularGraph& g) {
  const int n = g.atom_count();
  const int n_elements = ElementTable::core_size();
  Matrix features(n, n_elements + 3);
  for (int i = 0; i < n; ++i) {
    const Atom& atom = g.atom(i);
    auto idx = ElementTable::instance().index_of(atom.element);
    if (idx.has_value() && *idx < n_elements) features(i, *idx) = 1.0;
    features(i, n_elements + 0) = g.degree(i);
    features(i, n_elements + 1) = atom.formal_charge;
    features(i, n_elements + 2) = atom.aromatic ? 1.0 : 0.0;
  }
  return features;
}

Matrix prot_base_features(const ProteinSequence& p) {
  const std::size_t n = p.size();
  Matrix features(n, 21);
  for (std::size_t i = 0; i < n; ++i) {
    auto pos = kResidueAlphabet.find(p[i]);
    features(i, pos) = 1.0;
    features(i, 20) =
        n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
  }
  return features;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

bool is_molecule_kind(ModalityKind kind) {
  return kind == ModalityKind::kMol2d || kind == ModalityKind::kMol3d;
}

}  // namespace

const char* modality_name(ModalityKind kind) {
  switch (kind) {
    case ModalityKind::kMol2d:
      return "mol2d";
    case ModalityKind::kMol3d:
      return "mol3d";
    case ModalityKind::kProt1d:
      return "prot1d";
    case ModalityKind::kProt3d:
      return "prot3d";
  }
  return "?";
}

int modality_dim(ModalityKind kind) {
  switch (kind) {
    case ModalityKind::kMol2d:
      return ElementTable::core_size() + 3;
    case ModalityKind::kMol3d:
      return ElementTable::core_size() + 6;
    case ModalityKind::kProt1d:
      return 21;
    case ModalityKind::kProt3d:
      return 24;
  }
  return 0;
}

ModalityEmbedding featurize(const MolecularGraph& g, ModalityKind kind) {
  if (g.atom_count() == 0) {
    throw Error(ErrorKind::kEmptyGraph, "cannot featurize an empty graph");
  }
  if (!is_molecule_kind(kind)) {
    throw Error(ErrorKind::kValidationError,
                "molecule entities support mol2d and mol3d only");
  }
  Matrix base = mol_base_features(g);
  if (kind == ModalityKind::kMol2d) return {kind, std::move(base)};
  if (!g.has_coordinates()) {
    throw Error(ErrorKind::kMissingCoordinates,
                "mol3d requires atom coordinates");
  }
  std::vector<std::array<double, 3>> points(g.coordinates().begin(),
                                            g.coordinates().end());
  return {kind, hcat(base, distance_summary(points))};
}

ModalityEmbedding featurize(const ProteinSequence& p, ModalityKind kind) {
  if (kind == ModalityKind::kProt1d) {
    return {kind, prot_base_features(p)};
  }
  if (kind == ModalityKind::kProt3d) {
    throw Error(ErrorKind::kMissingCoordinates,
                "prot3d requires a backbone structure");
  }
  throw Error(ErrorKind::kValidationError,
              "protein entities support prot1d and prot3d only");
}

ModalityEmbedding featurize(const ProteinStructure& p, ModalityKind kind) {
  if (kind == ModalityKind::kProt1d) {
    return {kind, prot_base_features(p.sequence)};
  }
  if (kind != ModalityKind::kProt3d) {
    throw Error(ErrorKind::kValidationError,
                "protein entities support prot1d and prot3d only");
  }
  std::vector<std::array<double, 3>> ca;
  ca.reserve(p.backbone.size());
  for (const auto& residue : p.backbone) ca.push_back(residue.atoms[2]);
  return {kind, hcat(prot_base_features(p.sequence), distance_summary(ca))};
}

// ------------------------------------------------------------------
// Weights

namespace {

void seed_matrix(Matrix& m, const std::string& name, std::uint64_t seed) {
  SplitMix64 rng(seed ^ fnv1a64(name));
  for (double& v : m.data()) v = rng.next_uniform(-0.1, 0.1);
}

void seed_vector(Vector& v, const std::string& name, std::uint64_t seed) {
  SplitMix64 rng(seed ^ fnv1a64(name));
  for (double& x : v) x = rng.next_uniform(-0.1, 0.1);
}

LayerNormParams seeded_ln(int d) {
  return {Vector(d, 1.0), Vector(d, 0.0)};
}

MlpParams seeded_mlp(const std::string& prefix, int d_in, int d_hidden,
                     int d_out, std::uint64_t seed) {
  MlpParams p;
  p.w1 = Matrix(d_in, d_hidden);
  p.b1 = Vector(d_hidden, 0.0);
  p.w2 = Matrix(d_hidden, d_out);
  p.b2 = Vector(d_out, 0.0);
  seed_matrix(p.w1, prefix + ".w1", seed);
  seed_vector(p.b1, prefix + ".b1", seed);
  seed_matrix(p.w2, prefix + ".w2", seed);
  seed_vector(p.b2, prefix + ".b2", seed);
  return p;
}

AttentionParams seeded_attention(const std::string& prefix, int d,
                                 std::uint64_t seed) {
  AttentionParams p;
  for (auto [w, b, tag] : {std::tuple<Matrix*, Vector*, const char*>{
                               &p.wq, &p.bq, "q"},
                           {&p.wk, &p.bk, "k"},
                           {&p.wv, &p.bv, "v"},
                           {&p.wo, &p.bo, "o"}}) {
    *w = Matrix(d, d);
    *b = Vector(d, 0.0);
    seed_matrix(*w, prefix + ".w" + tag, seed);
    seed_vector(*b, prefix + ".b" + tag, seed);
  }
  return p;
}

void put_ln(TensorArchive& a, const std::string& prefix,
            const LayerNormParams& p) {
  a.put(prefix + ".gain", p.gain);
  a.put(prefix + ".bias", p.bias);
}

LayerNormParams get_ln(const TensorArchive& a, const std::string& prefix) {
  return {a.vector(prefix + ".gain"), a.vector(prefix + ".bias")};
}

void put_mlp(TensorArchive& a, const std::string& prefix, const MlpParams& p) {
  a.put(prefix + ".w1", p.w1);
  a.put(prefix + ".b1", p.b1);
  a.put(prefix + ".w2", p.w2);
  a.put(prefix + ".b2", p.b2);
}

MlpParams get_mlp(const TensorArchive& a, const std::string& prefix) {
  return {a.matrix(prefix + ".w1"), a.vector(prefix + ".b1"),
          a.matrix(prefix + ".w2"), a.vector(prefix + ".b2")};
}

void put_attention(TensorArchive& a, const std::string& prefix,
                   const AttentionParams& p) {
  a.put(prefix + ".wq", p.wq);
  a.put(prefix + ".bq", p.bq);
  a.put(prefix + ".wk", p.wk);
  a.put(prefix + ".bk", p.bk);
  a.put(prefix + ".wv", p.wv);
  a.put(prefix + ".bv", p.bv);
  a.put(prefix + ".wo", p.wo);
  a.put(prefix + ".bo", p.bo);
}

AttentionParams get_attention(const TensorArchive& a,
                              const std::string& prefix) {
  return {a.matrix(prefix + ".wq"), a.matrix(prefix + ".wk"),
          a.matrix(prefix + ".wv"), a.matrix(prefix + ".wo"),
          a.vector(prefix + ".bq"), a.vector(prefix + ".bk"),
          a.vector(prefix + ".bv"), a.vector(prefix + ".bo")};
}

}  // namespace

FusionWeights FusionWeights::seeded(const FusionConfig& config,
                                    std::uint64_t seed) {
  FusionWeights w;
  w.config = config;
  const int d = config.d;
  for (int m = 0; m < 4; ++m) {
    auto kind = static_cast<ModalityKind>(m);
    std::string prefix = std::string("fusion.") + modality_name(kind);
    w.modality_ln[m] = seeded_ln(modality_dim(kind));
    w.modality_mlp[m] =
        seeded_mlp(prefix + ".mlp", modality_dim(kind), d, d, seed);
  }
  for (int layer = 0; layer < config.n_layers; ++layer) {
    std::string prefix = "fusion.enc.layer" + std::to_string(layer);
    EncoderLayerParams enc;
    enc.ln1 = seeded_ln(d);
    enc.attn = seeded_attention(prefix + ".attn", d, seed);
    enc.ln2 = seeded_ln(d);
    enc.ff = seeded_mlp(prefix + ".ff", d, config.d_ff, d, seed);
    w.encoder.push_back(std::move(enc));

    prefix = "fusion.dec.layer" + std::to_string(layer);
    DecoderLayerParams dec;
    dec.ln1 = seeded_ln(d);
    dec.self_attn = seeded_attention(prefix + ".self", d, seed);
    dec.ln2 = seeded_ln(d);
    dec.cross_attn = seeded_attention(prefix + ".cross", d, seed);
    dec.ln3 = seeded_ln(d);
    dec.ff = seeded_mlp(prefix + ".ff", d, config.d_ff, d, seed);
    w.decoder.push_back(std::move(dec));
  }
  w.encoder_final_ln = seeded_ln(d);
  w.decoder_final_ln = seeded_ln(d);
  w.queries = Matrix(config.n_q, d);
  seed_matrix(w.queries, "fusion.queries", seed);
  w.motif_mol = Matrix(1024, d);
  seed_matrix(w.motif_mol, "motif.M_m", seed);
  if (config.n_protein_motifs > 0) {
    w.motif_protein = Matrix(config.n_protein_motifs, d);
    seed_matrix(w.motif_protein, "motif.M_p", seed);
  }
  return w;
}

void FusionWeights::save(TensorArchive& archive) const {
  for (int m = 0; m < 4; ++m) {
    auto kind = static_cast<ModalityKind>(m);
    std::string prefix = std::string("fusion.") + modality_name(kind);
    put_ln(archive, prefix + ".ln", modality_ln[m]);
    put_mlp(archive, prefix + ".mlp", modality_mlp[m]);
  }
  for (std::size_t layer = 0; layer < encoder.size(); ++layer) {
    std::string prefix = "fusion.enc.layer" + std::to_string(layer);
    put_ln(archive, prefix + ".ln1", encoder[layer].ln1);
    put_attention(archive, prefix + ".attn", encoder[layer].attn);
    put_ln(archive, prefix + ".ln2", encoder[layer].ln2);
    put_mlp(archive, prefix + ".ff", encoder[layer].ff);
  }
  for (std::size_t layer = 0; layer < decoder.size(); ++layer) {
    std::string prefix = "fusion.dec.layer" + std::to_string(layer);
    put_ln(archive, prefix + ".ln1", decoder[layer].ln1);
    put_attention(archive, prefix + ".self", decoder[layer].self_attn);
    put_ln(archive, prefix + ".ln2", decoder[layer].ln2);
    put_attention(archive, prefix + ".cross", decoder[layer].cross_attn);
    put_ln(archive, prefix + ".ln3", decoder[layer].ln3);
    put_mlp(archive, prefix + ".ff", decoder[layer].ff);
  }
  put_ln(archive, "fusion.enc.final_ln", encoder_final_ln);
  put_ln(archive, "fusion.dec.final_ln", decoder_final_ln);
  archive.put("fusion.queries", queries);
  archive.put("motif.M_m", motif_mol);
  if (motif_protein.rows() > 0) archive.put("motif.M_p", motif_protein);
  Vector meta = {static_cast<double>(config.d),
                 static_cast<double>(config.n_heads),
                 static_cast<double>(config.n_layers),
                 static_cast<double>(config.d_ff),
                 static_cast<double>(config.n_q)};
  archive.put("fusion.config", meta);
}

FusionWeights FusionWeights::load(const TensorArchive& archive) {
  FusionWeights w;
  Vector meta = archive.vector("fusion.config");
  if (meta.size() != 5) {
    throw Error(ErrorKind::kParseError, "fusion.config must hold 5 values");
  }
  w.config.d = static_cast<int>(meta[0]);
  w.config.n_heads = static_cast<int>(meta[1]);
  w.config.n_layers = static_cast<int>(meta[2]);
  w.config.d_ff = static_cast<int>(meta[3]);
  w.config.n_q = static_cast<int>(meta[4]);
  for (int m = 0; m < 4; ++m) {
    auto kind = static_cast<ModalityKind>(m);
    std::string prefix = std::string("fusion.") + modality_name(kind);
    w.modality_ln[m] = get_ln(archive, prefix + ".ln");
    w.modality_mlp[m] = get_mlp(archive, prefix + ".mlp");
  }
  for (int layer = 0; layer < w.config.n_layers; ++layer) {
    std::string prefix = "fusion.enc.layer" + std::to_string(layer);
    EncoderLayerParams enc;
    enc.ln1 = get_ln(archive, prefix + ".ln1");
    enc.attn = get_attention(archive, prefix + ".attn");
    enc.ln2 = get_ln(archive, prefix + ".ln2");
    enc.ff = get_mlp(archive, prefix + ".ff");
    w.encoder.push_back(std::move(enc));

    prefix = "fusion.dec.layer" + std::to_string(layer);
    DecoderLayerParams dec;
    dec.ln1 = get_ln(archive, prefix + ".ln1");
    dec.self_attn = get_attention(archive, prefix + ".self");
    dec.ln2 = get_ln(archive, prefix + ".ln2");
    dec.cross_attn = get_attention(archive, prefix + ".cross");
    dec.ln3 = get_ln(archive, prefix + ".ln3");
    dec.ff = get_mlp(archive, prefix + ".ff");
    w.decoder.push_back(std::move(dec));
  }
  w.encoder_final_ln = get_ln(archive, "fusion.enc.final_ln");
  w.decoder_final_ln = get_ln(archive, "fusion.dec.final_ln");
  w.queries = archive.matrix("fusion.queries");
  w.motif_mol = archive.matrix("motif.M_m");
  if (archive.contains("motif.M_p")) {
    w.motif_protein = archive.matrix("motif.M_p");
    w.config.n_protein_motifs = static_cast<int>(w.motif_protein.rows());
  }
  return w;
}

bool FusionWeights::all_finite() const {
  auto ln_ok = [](const LayerNormParams& p) {
    for (double v : p.gain) {
      if (!std::isfinite(v)) return false;
    }
    for (double v : p.bias) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  };
  auto mlp_ok = [&](const MlpParams& p) {
    auto vec_ok = [](const Vector& v) {
      for (double x : v) {
        if (!std::isfinite(x)) return false;
      }
      return true;
    };
    return p.w1.all_finite() && vec_ok(p.b1) && p.w2.all_finite() &&
           vec_ok(p.b2);
  };
  auto attn_ok = [&](const AttentionParams& p) {
    auto vec_ok = [](const Vector& v) {
      for (double x : v) {
        if (!std::isfinite(x)) return false;
      }
      return true;
    };
    return p.wq.all_finite() && p.wk.all_finite() && p.wv.all_finite() &&
           p.wo.all_finite() && vec_ok(p.bq) && vec_ok(p.bk) &&
           vec_ok(p.bv) && vec_ok(p.bo);
  };
  for (int m = 0; m < 4; ++m) {
    if (!ln_ok(modality_ln[m]) || !mlp_ok(modality_mlp[m])) return false;
  }
  for (const auto& layer : encoder) {
    if (!ln_ok(layer.ln1) || !attn_ok(layer.attn) || !ln_ok(layer.ln2) ||
        !mlp_ok(layer.ff)) {
      return false;
    }
  }
  for (const auto& layer : decoder) {
    if (!ln_ok(layer.ln1) || !attn_ok(layer.self_attn) || !ln_ok(layer.ln2) ||
        !attn_ok(layer.cross_attn) || !ln_ok(layer.ln3) || !mlp_ok(layer.ff)) {
      return false;
    }
  }
  return ln_ok(encoder_final_ln) && ln_ok(decoder_final_ln) &&
         queries.all_finite() && motif_mol.all_finite() &&
         motif_protein.all_finite();
}

// ------------------------------------------------------------------
// Forward pass

Matrix modality_transform(const ModalityEmbedding& e, const FusionWeights& w) {
  const int m = static_cast<int>(e.kind);
  const LayerNormParams& ln = w.modality_ln[m];
  if (ln.gain.size() != e.values.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::string(modality_name(e.kind)) + " width " +
                    std::to_string(e.values.cols()) + " != LayerNorm width " +
                    std::to_string(ln.gain.size()));
  }
  return mlp(layer_norm(e.values, ln), w.modality_mlp[m]);
}

Matrix project_concat(const ModalityEmbedding& a, const ModalityEmbedding& b,
                      const FusionWeights& w) {
  if (is_molecule_kind(a.kind) != is_molecule_kind(b.kind)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "modalities belong to different entity kinds");
  }
  if (a.values.rows() != b.values.rows()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "modalities disagree on token count");
  }
  Matrix ta = modality_transform(a, w);
  Matrix tb = modality_transform(b, w);
  Matrix h(ta.rows() + tb.rows(), ta.cols());
  for (std::size_t r = 0; r < ta.rows(); ++r) h.set_row(r, ta.row(r));
  for (std::size_t r = 0; r < tb.rows(); ++r) {
    h.set_row(ta.rows() + r, tb.row(r));
  }
  return h;
}

Matrix fuse(const Matrix& h, const Vector& prompt, const FusionWeights& w,
            FusionTrace* trace) {
  const std::size_t d = w.config.d;
  if (h.cols() != d) {
    throw Error(ErrorKind::kDimensionMismatch, "encoder input width != d");
  }
  if (prompt.size() != d) {
    throw Error(ErrorKind::kDimensionMismatch, "prompt width != d");
  }
  if (!w.all_finite()) {
    throw Error(ErrorKind::kNonFiniteWeights, "weights contain NaN or inf");
  }

  // Encoder: pre-LayerNorm self-attention stack, no positional encodings.
  Matrix x = h;
  for (const auto& layer : w.encoder) {
    Matrix normed = layer_norm(x, layer.ln1);
    add_inplace(x, attention(normed, normed, layer.attn, w.config.n_heads,
                             trace));
    add_inplace(x, mlp(layer_norm(x, layer.ln2), layer.ff));
  }
  Matrix memory = layer_norm(x, w.encoder_final_ln);

  // Decoder input: [prompt ; queries].
  Matrix y(1 + w.queries.rows(), d);
  y.set_row(0, prompt);
  for (std::size_t r = 0; r < w.queries.rows(); ++r) {
    y.set_row(1 + r, w.queries.row(r));
  }
  for (const auto& layer : w.decoder) {
    Matrix normed = layer_norm(y, layer.ln1);
    add_inplace(y, attention(normed, normed, layer.self_attn,
                             w.config.n_heads, trace));
    add_inplace(y, attention(layer_norm(y, layer.ln2), memory,
                             layer.cross_attn, w.config.n_heads, trace));
    add_inplace(y, mlp(layer_norm(y, layer.ln3), layer.ff));
  }
  return layer_norm(y, w.decoder_final_ln);
}

}  // namespace biomol

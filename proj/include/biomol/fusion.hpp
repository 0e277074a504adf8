//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_FUSION_HPP_
#define BIOMOL_FUSION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "biomol/molgraph.hpp"
#include "biomol/protseq.hpp"
#include "biomol/tensor.hpp"

namespace biomol {

enum class ModalityKind : std::uint8_t { kMol2d, kMol3d, kProt1d, kProt3d };

const char* modality_name(ModalityKind kind);

// Deterministic reference feature widths for the four modalities.
int modality_dim(ModalityKind kind);

struct ModalityEmbedding {
  ModalityKind kind;
  Matrix values;  // tokens x dim; one row per atom or residue
};

// Reference featurizers standing in for the pretrained encoders:
//   mol2d : element one-hot over the core table + degree + charge +
//           aromatic flag
//   mol3d : mol2d columns + per-atom (mean, min, max) pairwise distance
//   prot1d: residue one-hot + normalized position
//   prot3d: prot1d columns + per-residue (mean, min, max) CA distance
// 3d kinds require coordinates (MissingCoordinates).
ModalityEmbedding featurize(const MolecularGraph& g, ModalityKind kind);
ModalityEmbedding featurize(const ProteinSequence& p, ModalityKind kind);
ModalityEmbedding featurize(const ProteinStructure& p, ModalityKind kind);

struct LayerNormParams {
  Vector gain;
  Vector bias;
};

struct MlpParams {
  Matrix w1;  // d_in x d_hidden
  Vector b1;
  Matrix w2;  // d_hidden x d_out
  Vector b2;
};

struct AttentionParams {
  Matrix wq, wk, wv, wo;  // d x d
  Vector bq, bk, bv, bo;
};

struct EncoderLayerParams {
  LayerNormParams ln1;
  AttentionParams attn;
  LayerNormParams ln2;
  MlpParams ff;
};

struct DecoderLayerParams {
  LayerNormParams ln1;
  AttentionParams self_attn;
  LayerNormParams ln2;
  AttentionParams cross_attn;
  LayerNormParams ln3;
  MlpParams ff;
};

struct FusionConfig {
  int d = 16;
  int n_heads = 4;
  int n_layers = 2;
  int d_ff = 64;
  int n_q = 8;
  int n_protein_motifs = 0;  // rows of M_p; set from the dictionary
};

// Forward-pass weights for Eq-style projection, fusion, and the motif
// embedding matrices. Immutable after load; fuse() is pure.
struct FusionWeights {
  FusionConfig config;

  // Per-modality input transforms, indexed by ModalityKind.
  LayerNormParams modality_ln[4];
  MlpParams modality_mlp[4];

  std::vector<EncoderLayerParams> encoder;
  LayerNormParams encoder_final_ln;
  std::vector<DecoderLayerParams> decoder;
  LayerNormParams decoder_final_ln;

  Matrix queries;        // n_q x d
  Matrix motif_mol;      // 1024 x d  (M_m)
  Matrix motif_protein;  // n_protein_motifs x d  (M_p)

  // Deterministic initialization: every tensor entry is drawn uniform in
  // [-0.1, 0.1) from SplitMix64 seeded with seed ^ fnv1a64(tensor name),
  // so streams are independent of construction order. LayerNorm gains
  // start at 1, biases at 0.
  static FusionWeights seeded(const FusionConfig& config,
                              std::uint64_t seed);

  void save(TensorArchive& archive) const;
  static FusionWeights load(const TensorArchive& archive);

  bool all_finite() const;
};

// Per-row LayerNorm followed by the two-layer GELU MLP of the modality.
Matrix modality_transform(const ModalityEmbedding& e,
                          const FusionWeights& w);

// Row-stacks the two transformed modality embeddings: 2|V| x d for
// molecules, 2N x d for proteins. Throws DimensionMismatch when the
// token counts disagree or the modalities belong to different entity
// kinds.
Matrix project_concat(const ModalityEmbedding& a, const ModalityEmbedding& b,
                      const FusionWeights& w);

// Attention probability rows recorded during a forward pass, for
// diagnostics and tests. Each matrix row sums to 1.
struct FusionTrace {
  std::vector<Matrix> attention_rows;
};

// Multimodal features Z: encoder (pre-LayerNorm self-attention, no
// positional encodings) over h, decoder over [prompt ; queries] with
// cross-attention into the encoder output. Z has 1 + n_q rows ordered
// [prompt position, q_1 .. q_{n_q}]. Throws DimensionMismatch and
// NonFiniteWeights.
Matrix fuse(const Matrix& h, const Vector& prompt, const FusionWeights& w,
            FusionTrace* trace = nullptr);

}  // namespace biomol

#endif  // BIOMOL_FUSION_HPP_

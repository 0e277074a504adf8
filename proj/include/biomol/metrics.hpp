//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_METRICS_HPP_
#define BIOMOL_METRICS_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "biomol/molgraph.hpp"
#include "biomol/motif.hpp"
#include "biomol/protseq.hpp"

namespace biomol {

// ---------------------------------------------------------------------
// Report container

struct PairRecord {
  std::string ref_id;
  std::string hyp_id;
  std::string metric;
  double value;
};

struct MetricReport {
  std::vector<PairRecord> pairs;
  std::map<std::string, double> aggregates;

  std::string to_json() const;
  std::string to_csv() const;
};

// ---------------------------------------------------------------------
// Text metrics

// Lowercase tokens: maximal runs of alphanumeric characters; punctuation
// and whitespace delimit and are dropped.
std::vector<std::string> tokenize_text(std::string_view text);

// Corpus BLEU-2/BLEU-4 (brevity penalty, epsilon smoothing on zero
// counts), mean ROUGE-1/2 F1, ROUGE-L (LCS F1), and METEOR in its
// exact-match unigram form (Fmean = 10PR/(R+9P), chunk penalty
// 0.5*(chunks/matches)^3). All values scaled to [0, 100]. Pairs align by
// index; per-pair records hold sentence-level values, aggregates the
// corpus scores. Throws LengthMismatch and EmptyCorpus.
MetricReport nlg_metrics(const std::vector<std::string>& references,
                         const std::vector<std::string>& hypotheses,
                         int workers = 1);

// Corpus BLEU over pre-tokenized sentences (epsilon smoothing), 0..100.
double corpus_bleu(const std::vector<std::vector<std::string>>& references,
                   const std::vector<std::vector<std::string>>& hypotheses,
                   int max_order);

// Minimal insert/delete/substitute edit count.
std::size_t levenshtein(std::string_view a, std::string_view b);

// ---------------------------------------------------------------------
// Molecule metrics

// canonical_form equality.
bool exact_match(const MolecularGraph& ref, const MolecularGraph& gen);

// |a AND b| / |a OR b|; 1.0 when both vectors are all-zero. Throws
// LengthMismatch.
double tanimoto(const MotifVector& a, const MotifVector& b);

enum class MoleculeFormat { kSmiles, kSelfies };

// Percentage of strings that parse under the declared format and pass
// check_valence.
double molecule_validity(const std::vector<std::string>& texts,
                         MoleculeFormat format);

// ---------------------------------------------------------------------
// Protein metrics

// 2 * identical positions / (len_ref + len_gen) * 100; positions compared
// up to the shorter length. The raw-string form places no alphabet
// constraint on its inputs.
double identity(std::string_view ref, std::string_view gen);
double identity(const ProteinSequence& ref, const ProteinSequence& gen);

struct AlignmentScheme {
  double match = 1.0;
  double mismatch = -1.0;
  double gap = -1.0;  // linear
};

// Smith-Waterman local alignment score under the scheme, normalized to
// 2*score/(len_ref+len_gen)*100 and clamped at 0. The defaults make
// self-alignment exactly 100.
double sw_alignment(const ProteinSequence& ref, const ProteinSequence& gen,
                    const AlignmentScheme& scheme = {});

// Raw (un-normalized) best local alignment score.
double sw_score(std::string_view a, std::string_view b,
                const AlignmentScheme& scheme = {});

// 20x20 integer substitution scores in NCBI text matrix format.
class SubstitutionMatrix {
 public:
  // Parses comment lines (#), a header row of residues, then one row per
  // residue. Non-canonical columns (B, Z, X, *) are ignored. Throws
  // ParseError; the result must cover all residue pairs and be symmetric.
  static SubstitutionMatrix parse_ncbi(std::string_view text,
                                       std::string name);

  int score(char a, char b) const;  // throws InvalidResidue
  const std::string& name() const { return name_; }

 private:
  SubstitutionMatrix() = default;
  std::string name_;
  int scores_[20][20] = {};
};

// 2 * sum of position-wise substitution scores / (len_ref + len_gen),
// positions up to the shorter length.
double blosum_substitution(const ProteinSequence& ref,
                           const ProteinSequence& gen,
                           const SubstitutionMatrix& m);

// Percentage of strings accepted by validate_protein.
double protein_validity(const std::vector<std::string>& texts);

// ---------------------------------------------------------------------
// Ingested-score aggregation

struct DrugRow {
  std::string target;
  double vina;
  double qed;
  double sa;
  double ref_vina;
};

// Success Rate: vina < -8.18 AND qed > 0.25 AND sa > 0.59 (strict).
// High Affinity: vina < ref_vina. Also mean top-k vina per target for
// k in {1, 5, 10, all}, averaged across targets.
MetricReport drug_assessment(const std::vector<DrugRow>& rows);

struct EnzymeRow {
  std::string target;  // substrate id
  double identity;
  double alignment;
  double vina;
  double esp;
};

// Per-substrate top-1 values (max identity/alignment/esp, min vina),
// averaged across substrates.
MetricReport enzyme_assessment(const std::vector<EnzymeRow>& rows);

struct JointRow {
  double alignment;
  double vina;
  double qed;
  double sa;
};

// Success Rate with all four thresholds strict, as printed for the joint
// task: alignment > 30, vina > -8.18, qed > 0.25, sa > 0.59. Also mean
// top-n of (-alignment * vina) for n in {1, 5, 10, 20, 50, all}.
MetricReport joint_assessment(const std::vector<JointRow>& rows);

inline constexpr double kVinaThreshold = -8.18;
inline constexpr double kQedThreshold = 0.25;
inline constexpr double kSaThreshold = 0.59;
inline constexpr double kJointAlignmentThreshold = 30.0;

}  // namespace biomol

#endif  // BIOMOL_METRICS_HPP_

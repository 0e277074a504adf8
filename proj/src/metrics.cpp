//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "biomol/canonical.hpp"
#include "biomol/selfies.hpp"
#include "biomol/smiles.hpp"

namespace biomol {

namespace {

std::string json_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

}  // namespace

std::string MetricReport::to_json() const {
  std::string out = "{\"pairs\":[";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0) out += ",";
    out += "{\"ref\":\"" + json_escape(pairs[i].ref_id) + "\",\"hyp\":\"" +
           json_escape(pairs[i].hyp_id) + "\",\"metric\":\"" +
           json_escape(pairs[i].metric) +
           "\",\"value\":" + format_double(pairs[i].value) + "}";
  }
  out += "],\"aggregates\":{";
  bool first = true;
  for (const auto& [name, value] : aggregates) {
    if (!first) out += ",";
    first = false;
    out += "\"" + json_escape(name) + "\":" + format_double(value);
  }
  out += "}}";
  return out;
}

std::string MetricReport::to_csv() const {
  std::string out = "metric,ref,hyp,value\n";
  for (const auto& pair : pairs) {
    out += pair.metric + "," + pair.ref_id + "," + pair.hyp_id + "," +
           format_double(pair.value) + "\n";
  }
  for (const auto& [name, value] : aggregates) {
    out += name + ",,," + format_double(value) + "\n";
  }
  return out;
}

// ------------------------------------------------------------------
// Edit distance

std::size_t levenshtein(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::size_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t above = row[j];
      std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + cost});
      diagonal = above;
    }
  }
  return row[m];
}

// ------------------------------------------------------------------
// Molecule metrics

bool exact_match(const MolecularGraph& ref, const MolecularGraph& gen) {
  return canonical_form(ref) == canonical_form(gen);
}

double tanimoto(const MotifVector& a, const MotifVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "fingerprint lengths " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  int both = 0;
  int either = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool x = a.bits[i] != 0;
    bool y = b.bits[i] != 0;
    both += x && y;
    either += x || y;
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

double molecule_validity(const std::vector<std::string>& texts,
                         MoleculeFormat format) {
  if (texts.empty()) return 0.0;
  int valid = 0;
  for (const auto& text : texts) {
    try {
      MolecularGraph g = format == MoleculeFormat::kSmiles
                             ? parse_smiles(text)
                             : decode_selfies(parse_selfies(text));
      if (check_valence(g).valid()) ++valid;
    } catch (const Error&) {
    }
  }
  return 100.0 * valid / static_cast<double>(texts.size());
}

// ------------------------------------------------------------------
// Protein metrics

double identity(std::string_view ref, std::string_view gen) {
  const std::size_t overlap = std::min(ref.size(), gen.size());
  std::size_t same = 0;
  for (std::size_t i = 0; i < overlap; ++i) same += ref[i] == gen[i];
  return 200.0 * static_cast<double>(same) /
         static_cast<double>(ref.size() + gen.size());
}

double identity(const ProteinSequence& ref, const ProteinSequence& gen) {
  return identity(std::string_view(ref.str()), std::string_view(gen.str()));
}

double sw_score(std::string_view a, std::string_view b,
                const AlignmentScheme& scheme) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> row(m + 1, 0.0);
  double best = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double diagonal = row[0];
    row[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
      double above = row[j];
      double score = a[i - 1] == b[j - 1] ? scheme.match : scheme.mismatch;
      double value = std::max({0.0, diagonal + score, above + scheme.gap,
                               row[j - 1] + scheme.gap});
      row[j] = value;
      best = std::max(best, value);
      diagonal = above;
    }
  }
  return best;
}

double sw_alignment(const ProteinSequence& ref, const ProteinSequence& gen,
                    const AlignmentScheme& scheme) {
  double score = sw_score(ref.str(), gen.str(), scheme);
  double normalized =
      200.0 * score / static_cast<double>(ref.size() + gen.size());
  return std::max(0.0, normalized);
}

SubstitutionMatrix SubstitutionMatrix::parse_ncbi(std::string_view text,
                                                  std::string name) {
  SubstitutionMatrix matrix;
  matrix.name_ = std::move(name);
  std::istringstream stream{std::string(text)};
  std::string line;
  std::vector<int> columns;  // residue index per column, -1 for ignored
  bool have_header = false;
  bool filled[20][20] = {};
  while (std::getline(stream, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    if (!have_header) {
      std::string label;
      while (fields >> label) {
        if (label.size() == 1 && is_canonical_residue(label[0])) {
          columns.push_back(
              static_cast<int>(kResidueAlphabet.find(label[0])));
        } else {
          columns.push_back(-1);
        }
      }
      if (columns.empty()) {
        throw Error(ErrorKind::kParseError, "empty matrix header");
      }
      have_header = true;
      continue;
    }
    std::string row_label;
    fields >> row_label;
    if (row_label.size() != 1) {
      throw Error(ErrorKind::kParseError, "bad row label " + row_label);
    }
    if (!is_canonical_residue(row_label[0])) {
      continue;  // B, Z, X, * rows
    }
    int row = static_cast<int>(kResidueAlphabet.find(row_label[0]));
    for (int column : columns) {
      int value;
      if (!(fields >> value)) {
        throw Error(ErrorKind::kParseError,
                    "row " + row_label + ": missing scores");
      }
      if (column >= 0) {
        matrix.scores_[row][column] = value;
        filled[row][column] = true;
      }
    }
  }
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      if (!filled[i][j]) {
        throw Error(ErrorKind::kParseError, "matrix does not cover all pairs");
      }
      if (matrix.scores_[i][j] != matrix.scores_[j][i]) {
        throw Error(ErrorKind::kParseError, "matrix is not symmetric");
      }
    }
  }
  return matrix;
}

int SubstitutionMatrix::score(char a, char b) const {
  auto ia = kResidueAlphabet.find(a);
  auto ib = kResidueAlphabet.find(b);
  if (ia == std::string_view::npos || ib == std::string_view::npos) {
    throw Error(ErrorKind::kInvalidResidue,
                std::string("pair ") + a + "/" + b);
  }
  return scores_[ia][ib];
}

double blosum_substitution(const ProteinSequence& ref,
                           const ProteinSequence& gen,
                           const SubstitutionMatrix& m) {
  const std::size_t overlap = std::min(ref.size(), gen.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < overlap; ++i) sum += m.score(ref[i], gen[i]);
  return 2.0 * sum / static_cast<double>(ref.size() + gen.size());
}

double protein_validity(const std::vector<std::string>& texts) {
  if (texts.empty()) return 0.0;
  int valid = 0;
  for (const auto& text : texts) valid += validate_protein(text) ? 1 : 0;
  return 100.0 * valid / static_cast<double>(texts.size());
}

// ------------------------------------------------------------------
// Ingested-score aggregation

namespace {

double mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

// Mean of the first k values (all when k <= 0 or k > size).
double top_k_mean(const std::vector<double>& sorted, int k) {
  if (sorted.empty()) return 0.0;
  std::size_t take = k <= 0 ? sorted.size()
                            : std::min<std::size_t>(k, sorted.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += sorted[i];
  return sum / static_cast<double>(take);
}

}  // namespace

MetricReport drug_assessment(const std::vector<DrugRow>& rows) {
  if (rows.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "no drug rows");
  }
  MetricReport report;
  int successes = 0;
  int high_affinity = 0;
  std::map<std::string, std::vector<double>> per_target;
  for (const auto& row : rows) {
    bool success = row.vina < kVinaThreshold && row.qed > kQedThreshold &&
                   row.sa > kSaThreshold;
    successes += success ? 1 : 0;
    high_affinity += row.vina < row.ref_vina ? 1 : 0;
    per_target[row.target].push_back(row.vina);
    report.pairs.push_back({row.target, "", "success", success ? 1.0 : 0.0});
  }
  report.aggregates["success_rate"] =
      100.0 * successes / static_cast<double>(rows.size());
  report.aggregates["high_affinity"] =
      100.0 * high_affinity / static_cast<double>(rows.size());

  const std::pair<const char*, int> ks[] = {
      {"vina_top1", 1}, {"vina_top5", 5}, {"vina_top10", 10}, {"vina_all", 0}};
  std::map<std::string, std::vector<double>> across;
  for (auto& [target, vinas] : per_target) {
    std::sort(vinas.begin(), vinas.end());  // ascending: lower binds better
    for (const auto& [label, k] : ks) {
      double value = top_k_mean(vinas, k);
      report.pairs.push_back({target, "", label, value});
      across[label].push_back(value);
    }
  }
  for (const auto& [label, values] : across) {
    report.aggregates[label] = mean(values);
  }
  return report;
}

MetricReport enzyme_assessment(const std::vector<EnzymeRow>& rows) {
  if (rows.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "no enzyme rows");
  }
  MetricReport report;
  std::map<std::string, std::vector<const EnzymeRow*>> per_substrate;
  for (const auto& row : rows) per_substrate[row.target].push_back(&row);

  std::vector<double> top_identity, top_alignment, top_vina, top_esp;
  for (const auto& [substrate, group] : per_substrate) {
    double best_identity = group[0]->identity;
    double best_alignment = group[0]->alignment;
    double best_vina = group[0]->vina;
    double best_esp = group[0]->esp;
    for (const auto* row : group) {
      best_identity = std::max(best_identity, row->identity);
      best_alignment = std::max(best_alignment, row->alignment);
      best_vina = std::min(best_vina, row->vina);
      best_esp = std::max(best_esp, row->esp);
    }
    report.pairs.push_back({substrate, "", "identity_top1", best_identity});
    report.pairs.push_back({substrate, "", "alignment_top1", best_alignment});
    report.pairs.push_back({substrate, "", "vina_top1", best_vina});
    report.pairs.push_back({substrate, "", "esp_top1", best_esp});
    top_identity.push_back(best_identity);
    top_alignment.push_back(best_alignment);
    top_vina.push_back(best_vina);
    top_esp.push_back(best_esp);
  }
  report.aggregates["identity_top1"] = mean(top_identity);
  report.aggregates["alignment_top1"] = mean(top_alignment);
  report.aggregates["vina_top1"] = mean(top_vina);
  report.aggregates["esp_top1"] = mean(top_esp);
  return report;
}

MetricReport joint_assessment(const std::vector<JointRow>& rows) {
  if (rows.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "no joint rows");
  }
  MetricReport report;
  int successes = 0;
  std::vector<double> quality;  // -alignment * vina, higher is better
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    bool success = row.alignment > kJointAlignmentThreshold &&
                   row.vina > kVinaThreshold && row.qed > kQedThreshold &&
                   row.sa > kSaThreshold;
    successes += success ? 1 : 0;
    double q = -row.alignment * row.vina;
    quality.push_back(q);
    report.pairs.push_back(
        {std::to_string(i), "", "success", success ? 1.0 : 0.0});
    report.pairs.push_back({std::to_string(i), "", "quality", q});
  }
  report.aggregates["success_rate"] =
      100.0 * successes / static_cast<double>(rows.size());
  std::sort(quality.begin(), quality.end(), std::greater<double>());
  const std::pair<const char*, int> ns[] = {
      {"quality_top1", 1},   {"quality_top5", 5},  {"quality_top10", 10},
      {"quality_top20", 20}, {"quality_top50", 50}, {"quality_all", 0}};
  for (const auto& [label, n] : ns) {
    report.aggregates[label] = top_k_mean(quality, n);
  }
  return report;
}

}  // namespace biomol

//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "biomol/canonical.hpp"
#include "biomol/fusion.hpp"
#include "biomol/metrics.hpp"
#include "biomol/motif.hpp"
#include "biomol/pipeline.hpp"
#include "biomol/selfies.hpp"
#include "biomol/smiles.hpp"
#include "biomol/vocab.hpp"

namespace biomol::cli {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::istringstream stream(slurp(path));
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

Vocabulary load_vocabulary(const std::string& path) {
  if (path.empty()) return Vocabulary::default_vocabulary();
  return Vocabulary::load(slurp(path));
}

MotifDictionary load_dictionary(const std::string& path) {
  std::string resolved =
      path.empty() ? data_dir() + "/protein_motifs.txt" : path;
  return MotifDictionary::load(slurp(resolved));
}

SubstitutionMatrix load_matrix(const std::string& path) {
  std::string resolved = path.empty() ? data_dir() + "/blosum45.txt" : path;
  return SubstitutionMatrix::parse_ncbi(slurp(resolved), "BLOSUM45");
}

void emit_report(const MetricReport& report, bool csv, std::ostream& out) {
  if (csv) {
    out << report.to_csv();
  } else {
    out << report.to_json() << "\n";
  }
}

double require_number(const json& row, const char* field, std::size_t index) {
  if (!row.contains(field) || !row.at(field).is_number()) {
    throw Error(ErrorKind::kMissingField,
                "row " + std::to_string(index) + ": needs numeric '" +
                    field + "'",
                index);
  }
  return row.at(field).get<double>();
}

std::vector<json> read_table(const std::string& path) {
  std::vector<json> rows;
  std::istringstream stream(slurp(path));
  std::string line;
  std::size_t index = 0;
  while (std::getline(stream, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row = json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) {
      throw Error(ErrorKind::kParseError,
                  "row " + std::to_string(index) + ": malformed JSON", index);
    }
    rows.push_back(std::move(row));
    ++index;
  }
  return rows;
}

// Entity input for `fuse`: a JSON object with either
//   {"smiles"|"selfies": ..., "coords": [[x,y,z], ...]}
// or {"fasta": ..., "backbone": "<12 numbers per line>"}.
struct FuseInput {
  std::optional<MolecularGraph> molecule;
  std::optional<ProteinStructure> protein;
};

FuseInput read_fuse_input(const std::string& path) {
  json j = json::parse(slurp(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorKind::kParseError, path + ": malformed JSON");
  }
  FuseInput input;
  if (j.contains("smiles") || j.contains("selfies")) {
    MolecularGraph g =
        j.contains("smiles")
            ? parse_smiles(j.at("smiles").get<std::string>())
            : decode_selfies(
                  parse_selfies(j.at("selfies").get<std::string>()));
    if (!j.contains("coords")) {
      throw Error(ErrorKind::kMissingCoordinates,
                  "molecule entities need a coords array");
    }
    std::vector<Point3> coords;
    for (const auto& point : j.at("coords")) {
      coords.push_back({point.at(0).get<double>(), point.at(1).get<double>(),
                        point.at(2).get<double>()});
    }
    g.set_coordinates(std::move(coords));
    input.molecule = std::move(g);
    return input;
  }
  if (j.contains("fasta")) {
    ProteinSequence seq(j.at("fasta").get<std::string>());
    if (!j.contains("backbone")) {
      throw Error(ErrorKind::kMissingCoordinates,
                  "protein entities need a backbone block");
    }
    input.protein = load_backbone(seq, j.at("backbone").get<std::string>());
    return input;
  }
  throw Error(ErrorKind::kParseError,
              path + ": expected smiles, selfies, or fasta");
}

// ------------------------------------------------------------------
// Subcommand bodies. Each returns the process exit code.

int cmd_tokenize(const std::string& format, const std::string& vocab_path,
                 const std::string& input, bool extend,
                 const std::string& save_path, std::ostream& out) {
  Vocabulary vocab = load_vocabulary(vocab_path);
  if (format == "molecule") {
    for (const auto& line : read_lines(input)) {
      if (line.empty()) continue;
      auto ids = vocab.tokenize_molecule(parse_selfies(line), extend);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        out << (i ? " " : "") << ids[i];
      }
      out << "\n";
    }
  } else {
    for (const auto& record : parse_fasta(slurp(input))) {
      auto ids = vocab.tokenize_protein(record.sequence);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        out << (i ? " " : "") << ids[i];
      }
      out << "\n";
    }
  }
  if (!save_path.empty()) {
    std::ofstream file(save_path);
    if (!file) throw Error(ErrorKind::kIoError, "cannot write " + save_path);
    file << vocab.save();
  }
  return 0;
}

int cmd_detokenize(const std::string& vocab_path, const std::string& input,
                   std::ostream& out) {
  Vocabulary vocab = load_vocabulary(vocab_path);
  for (const auto& line : read_lines(input)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<TokenId> ids;
    TokenId id;
    while (fields >> id) ids.push_back(id);
    out << vocab.detokenize(ids) << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& format, const std::string& input,
                 std::ostream& out) {
  json violations = json::array();
  std::size_t total = 0;
  std::size_t valid = 0;
  auto note = [&](std::size_t line_no, const std::string& message) {
    violations.push_back({{"line", line_no}, {"error", message}});
  };
  if (format == "fasta") {
    // record-per-record validation so line numbers stay meaningful
    const auto lines = read_lines(input);
    std::string buffer;
    std::size_t record_line = 1;
    auto flush = [&]() {
      if (buffer.empty()) return;
      ++total;
      try {
        parse_fasta(buffer);
        ++valid;
      } catch (const Error& e) {
        note(record_line, e.what());
      }
      buffer.clear();
    };
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (!lines[i].empty() && lines[i][0] == '>') {
        flush();
        record_line = i + 1;
      }
      buffer += lines[i];
      buffer += "\n";
    }
    flush();
  } else {
    const auto lines = read_lines(input);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      ++total;
      try {
        MolecularGraph g = format == "smiles"
                               ? parse_smiles(lines[i])
                               : decode_selfies(parse_selfies(lines[i]));
        auto report = check_valence(g);
        if (report.valid()) {
          ++valid;
        } else {
          note(i + 1, "valence violation at atom " +
                          std::to_string(report.violations[0].atom_index));
        }
      } catch (const Error& e) {
        note(i + 1, e.what());
      }
    }
  }
  json summary = {
      {"total", total}, {"valid", valid}, {"violations", violations}};
  out << summary.dump(2) << "\n";
  return valid == total ? 0 : 1;
}

int cmd_canon(const std::string& input, std::ostream& out) {
  for (const auto& line : read_lines(input)) {
    if (line.empty()) continue;
    out << canonical_form(parse_smiles(line)) << "\n";
  }
  return 0;
}

int cmd_fingerprint(const std::string& format, const std::string& input,
                    int radius, int n_bits, std::ostream& out) {
  for (const auto& line : read_lines(input)) {
    if (line.empty()) continue;
    MolecularGraph g = format == "smiles"
                           ? parse_smiles(line)
                           : decode_selfies(parse_selfies(line));
    out << fcfp(g, radius, n_bits).hex() << "\n";
  }
  return 0;
}

int cmd_motif(const std::string& input, const std::string& dict_path,
              std::ostream& out) {
  MotifDictionary dict = load_dictionary(dict_path);
  for (const auto& record : parse_fasta(slurp(input))) {
    auto bits = protein_motif_vector(record.sequence, dict);
    out << ">" << record.header << "\n";
    bool first = true;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (!bits.bits[i]) continue;
      out << (first ? "" : " ") << i;
      first = false;
    }
    out << "\n";
  }
  return 0;
}

int cmd_fuse(const std::string& input, const std::string& weights_path,
             std::optional<std::uint64_t> seed, int d, int heads, int layers,
             int ff, int n_q, const std::string& dict_path,
             std::ostream& out) {
  FuseInput entity = read_fuse_input(input);
  MotifDictionary dict = load_dictionary(dict_path);

  FusionWeights weights;
  if (!weights_path.empty()) {
    std::istringstream stream(slurp(weights_path));
    weights = FusionWeights::load(TensorArchive::read(stream));
  } else if (seed.has_value()) {
    FusionConfig config{d, heads, layers, ff, n_q,
                        static_cast<int>(dict.size())};
    weights = FusionWeights::seeded(config, *seed);
  } else {
    throw Error(ErrorKind::kValidationError,
                "either --weights or --seed is required");
  }

  Matrix h;
  Vector prompt;
  if (entity.molecule.has_value()) {
    const auto& g = *entity.molecule;
    h = project_concat(featurize(g, ModalityKind::kMol2d),
                       featurize(g, ModalityKind::kMol3d), weights);
    prompt = motif_prompt(fcfp(g), weights.motif_mol);
  } else {
    const auto& p = *entity.protein;
    h = project_concat(featurize(p, ModalityKind::kProt1d),
                       featurize(p, ModalityKind::kProt3d), weights);
    if (weights.motif_protein.rows() != dict.size()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "motif embedding rows do not match the dictionary");
    }
    prompt = motif_prompt(protein_motif_vector(p.sequence, dict),
                          weights.motif_protein);
  }
  Matrix z = fuse(h, prompt, weights);
  TensorArchive archive;
  archive.put("Z", z);
  archive.write(out);
  return 0;
}

int cmd_metrics_caption(const std::string& refs_path,
                        const std::string& hyps_path, int workers, bool csv,
                        std::ostream& out) {
  auto report =
      nlg_metrics(read_lines(refs_path), read_lines(hyps_path), workers);
  emit_report(report, csv, out);
  return 0;
}

int cmd_metrics_molgen(const std::string& refs_path,
                       const std::string& hyps_path,
                       const std::string& format, bool csv,
                       std::ostream& out) {
  auto refs = read_lines(refs_path);
  auto hyps = read_lines(hyps_path);
  if (refs.size() != hyps.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "reference and hypothesis counts differ");
  }
  if (refs.empty()) throw Error(ErrorKind::kEmptyCorpus, "no pairs");
  MoleculeFormat mol_format = format == "smiles" ? MoleculeFormat::kSmiles
                                                 : MoleculeFormat::kSelfies;
  auto to_graph =
      [&](const std::string& text) -> std::optional<MolecularGraph> {
    try {
      MolecularGraph g = mol_format == MoleculeFormat::kSmiles
                             ? parse_smiles(text)
                             : decode_selfies(parse_selfies(text));
      if (!check_valence(g).valid()) return std::nullopt;
      return g;
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  MetricReport report;
  double exact_sum = 0.0;
  double lev_sum = 0.0;
  double fts_sum = 0.0;
  std::vector<std::vector<std::string>> ref_chars, hyp_chars;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    std::string id = std::to_string(i);
    auto ref_graph = to_graph(refs[i]);
    auto hyp_graph = to_graph(hyps[i]);
    double exact = 0.0;
    double fts = 0.0;
    if (ref_graph && hyp_graph) {
      exact = exact_match(*ref_graph, *hyp_graph) ? 1.0 : 0.0;
      fts = tanimoto(fcfp(*ref_graph), fcfp(*hyp_graph));
    }
    double lev = static_cast<double>(levenshtein(refs[i], hyps[i]));
    exact_sum += exact;
    lev_sum += lev;
    fts_sum += fts;
    report.pairs.push_back({id, id, "exact", exact});
    report.pairs.push_back({id, id, "levenshtein", lev});
    report.pairs.push_back({id, id, "fcfp_fts", fts});

    std::vector<std::string> rc, hc;
    for (char c : refs[i]) rc.emplace_back(1, c);
    for (char c : hyps[i]) hc.emplace_back(1, c);
    ref_chars.push_back(std::move(rc));
    hyp_chars.push_back(std::move(hc));
  }
  const double n = static_cast<double>(refs.size());
  report.aggregates["bleu"] = corpus_bleu(ref_chars, hyp_chars, 4);
  report.aggregates["exact"] = 100.0 * exact_sum / n;
  report.aggregates["levenshtein"] = lev_sum / n;
  report.aggregates["fcfp_fts"] = fts_sum / n;
  report.aggregates["validity"] = molecule_validity(hyps, mol_format);
  emit_report(report, csv, out);
  return 0;
}

int cmd_metrics_protgen(const std::string& refs_path,
                        const std::string& hyps_path,
                        const std::string& matrix_path, bool csv,
                        std::ostream& out) {
  auto refs = parse_fasta(slurp(refs_path));
  // hypotheses may be invalid sequences; read records leniently
  auto hyp_lines = read_lines(hyps_path);
  std::vector<std::pair<std::string, std::string>> hyps;
  std::string header;
  std::string sequence;
  bool in_record = false;
  for (const auto& line : hyp_lines) {
    if (!line.empty() && line[0] == '>') {
      if (in_record) hyps.emplace_back(header, sequence);
      header = line.substr(1);
      sequence.clear();
      in_record = true;
    } else if (in_record) {
      sequence += line;
    }
  }
  if (in_record) hyps.emplace_back(header, sequence);
  if (refs.size() != hyps.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                std::to_string(refs.size()) + " references vs " +
                    std::to_string(hyps.size()) + " hypotheses");
  }
  if (refs.empty()) throw Error(ErrorKind::kEmptyCorpus, "no pairs");

  SubstitutionMatrix matrix = load_matrix(matrix_path);
  MetricReport report;
  double id_sum = 0.0, align_sum = 0.0, blosum_sum = 0.0;
  std::vector<std::string> hyp_texts;
  int scored = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    hyp_texts.push_back(hyps[i].second);
    std::string id = std::to_string(i);
    if (!validate_protein(hyps[i].second)) {
      report.pairs.push_back({id, id, "valid", 0.0});
      continue;
    }
    ProteinSequence hyp(hyps[i].second);
    double idv = identity(refs[i].sequence, hyp);
    double alignv = sw_alignment(refs[i].sequence, hyp);
    double blosumv = blosum_substitution(refs[i].sequence, hyp, matrix);
    id_sum += idv;
    align_sum += alignv;
    blosum_sum += blosumv;
    ++scored;
    report.pairs.push_back({id, id, "identity", idv});
    report.pairs.push_back({id, id, "alignment", alignv});
    report.pairs.push_back({id, id, "blosum", blosumv});
    report.pairs.push_back({id, id, "valid", 1.0});
  }
  if (scored > 0) {
    report.aggregates["identity"] = id_sum / scored;
    report.aggregates["alignment"] = align_sum / scored;
    report.aggregates["blosum"] = blosum_sum / scored;
  }
  report.aggregates["validity"] = protein_validity(hyp_texts);
  emit_report(report, csv, out);
  return 0;
}

int cmd_metrics_drug(const std::string& table_path, bool csv,
                     std::ostream& out) {
  std::vector<DrugRow> rows;
  std::size_t index = 0;
  for (const auto& row : read_table(table_path)) {
    DrugRow r;
    r.target = row.value("target", std::string("all"));
    r.vina = require_number(row, "vina", index);
    r.qed = require_number(row, "qed", index);
    r.sa = require_number(row, "sa", index);
    r.ref_vina = require_number(row, "ref_vina", index);
    rows.push_back(std::move(r));
    ++index;
  }
  emit_report(drug_assessment(rows), csv, out);
  return 0;
}

int cmd_metrics_enzyme(const std::string& table_path, bool csv,
                       std::ostream& out) {
  std::vector<EnzymeRow> rows;
  std::size_t index = 0;
  for (const auto& row : read_table(table_path)) {
    EnzymeRow r;
    r.target = row.value("target", std::string("all"));
    r.identity = require_number(row, "identity", index);
    r.alignment = require_number(row, "alignment", index);
    r.vina = require_number(row, "vina", index);
    r.esp = require_number(row, "esp", index);
    rows.push_back(std::move(r));
    ++index;
  }
  emit_report(enzyme_assessment(rows), csv, out);
  return 0;
}

int cmd_metrics_joint(const std::string& table_path, bool csv,
                      std::ostream& out) {
  std::vector<JointRow> rows;
  std::size_t index = 0;
  for (const auto& row : read_table(table_path)) {
    JointRow r;
    r.alignment = require_number(row, "alignment", index);
    r.vina = require_number(row, "vina", index);
    r.qed = require_number(row, "qed", index);
    r.sa = require_number(row, "sa", index);
    rows.push_back(std::move(r));
    ++index;
  }
  emit_report(joint_assessment(rows), csv, out);
  return 0;
}

int cmd_plan(int stage, const std::string& table_path, std::ostream& out) {
  SamplingPlan plan;
  if (table_path.empty()) {
    plan = build_plan(stage, stage_ratio_table(stage));
  } else {
    json j = json::parse(slurp(table_path), nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorKind::kParseError, table_path + ": malformed JSON");
    }
    std::vector<std::pair<std::string, double>> table;
    for (const auto& entry : j.at("entries")) {
      table.emplace_back(entry.at("task_id").get<std::string>(),
                         entry.at("ratio").get<double>());
    }
    plan = build_plan(stage, table);
  }
  out << plan.to_json() << "\n";
  return 0;
}

int cmd_sample(const std::string& plan_path, std::uint64_t seed,
               std::size_t count, std::ostream& out) {
  auto plan = SamplingPlan::from_json(slurp(plan_path));
  for (const auto& task : sample_stream(plan, seed, count)) {
    out << task << "\n";
  }
  return 0;
}

}  // namespace

std::string data_dir() {
  if (const char* env = std::getenv("IBM_DATA_DIR")) {
    if (env[0] != '\0') return env;
  }
#ifdef BIOMOL_DEFAULT_DATA_DIR
  return BIOMOL_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"biomolecular string, feature, and metric toolkit"};
  app.require_subcommand(1);

  auto* tokenize = app.add_subcommand("tokenize", "biomolecule text to ids");
  std::string tok_format;
  std::string tok_vocab;
  std::string tok_input;
  bool tok_extend = false;
  tokenize->add_option("--format", tok_format, "molecule|protein")
      ->required()
      ->check(CLI::IsMember({"molecule", "protein"}));
  tokenize->add_option("--vocab", tok_vocab, "vocabulary file");
  tokenize->add_flag("--extend", tok_extend,
                     "grow the vocabulary on novel tokens");
  std::string tok_save;
  tokenize->add_option("--save-vocab", tok_save,
                       "write the (possibly extended) vocabulary");
  tokenize->add_option("input", tok_input, "input file")->required();

  auto* detokenize = app.add_subcommand("detokenize", "ids back to text");
  std::string detok_vocab;
  std::string detok_input;
  detokenize->add_option("--vocab", detok_vocab, "vocabulary file");
  detokenize->add_option("input", detok_input, "id lines")->required();

  auto* validate = app.add_subcommand("validate", "validity report");
  std::string val_format;
  std::string val_input;
  validate->add_option("--format", val_format, "selfies|smiles|fasta")
      ->required()
      ->check(CLI::IsMember({"selfies", "smiles", "fasta"}));
  validate->add_option("input", val_input, "input file")->required();

  auto* canon = app.add_subcommand("canon", "canonical molecule strings");
  std::string canon_input;
  canon->add_option("input", canon_input, "SMILES lines")->required();

  auto* fingerprint =
      app.add_subcommand("fingerprint", "functional-class fingerprints");
  std::string fp_format = "smiles";
  std::string fp_input;
  int fp_radius = 2;
  int fp_bits = 1024;
  fingerprint->add_option("--format", fp_format, "smiles|selfies")
      ->check(CLI::IsMember({"smiles", "selfies"}));
  fingerprint->add_option("--radius", fp_radius, "iteration rounds")
      ->check(CLI::NonNegativeNumber);
  fingerprint->add_option("--bits", fp_bits, "fingerprint width")
      ->check(CLI::PositiveNumber);
  fingerprint->add_option("input", fp_input, "molecule lines")->required();

  auto* motif = app.add_subcommand("motif", "protein motif bits");
  std::string motif_input;
  std::string motif_dict;
  motif->add_option("--dictionary", motif_dict, "motif dictionary file");
  motif->add_option("input", motif_input, "FASTA file")->required();

  auto* fuse_cmd = app.add_subcommand("fuse", "multimodal feature fusion");
  std::string fuse_input;
  std::string fuse_weights;
  std::string fuse_dict;
  std::uint64_t fuse_seed = 0;
  int fuse_d = 16, fuse_heads = 4, fuse_layers = 2, fuse_ff = 64, fuse_nq = 8;
  auto* fuse_seed_opt =
      fuse_cmd->add_option("--seed", fuse_seed, "deterministic weight seed");
  fuse_cmd->add_option("--weights", fuse_weights, "tensor archive");
  fuse_cmd->add_option("--d", fuse_d, "model width")
      ->check(CLI::PositiveNumber);
  fuse_cmd->add_option("--heads", fuse_heads, "attention heads")
      ->check(CLI::PositiveNumber);
  fuse_cmd->add_option("--layers", fuse_layers, "encoder/decoder layers")
      ->check(CLI::PositiveNumber);
  fuse_cmd->add_option("--ff", fuse_ff, "feed-forward width")
      ->check(CLI::PositiveNumber);
  fuse_cmd->add_option("--nq", fuse_nq, "learnable query count")
      ->check(CLI::PositiveNumber);
  fuse_cmd->add_option("--dictionary", fuse_dict, "motif dictionary file");
  fuse_cmd->add_option("input", fuse_input, "entity JSON")->required();

  auto* metrics = app.add_subcommand("metrics", "evaluation metrics");
  metrics->require_subcommand(1);
  bool csv = false;
  int workers = 1;
  metrics->add_flag("--csv", csv, "CSV output");
  metrics->add_option("--workers", workers, "pair-parallel workers")
      ->check(CLI::PositiveNumber);

  std::string m_refs, m_hyps, m_table, m_format = "smiles", m_matrix;
  auto* caption = metrics->add_subcommand("caption", "text metrics");
  caption->add_option("refs", m_refs, "reference lines")->required();
  caption->add_option("hyps", m_hyps, "hypothesis lines")->required();
  auto* protqa = metrics->add_subcommand("protqa", "text metrics");
  protqa->add_option("refs", m_refs, "reference lines")->required();
  protqa->add_option("hyps", m_hyps, "hypothesis lines")->required();
  auto* molgen = metrics->add_subcommand("molgen", "molecule generation");
  molgen->add_option("refs", m_refs, "reference molecules")->required();
  molgen->add_option("hyps", m_hyps, "hypothesis molecules")->required();
  molgen->add_option("--format", m_format, "smiles|selfies")
      ->check(CLI::IsMember({"smiles", "selfies"}));
  auto* protgen = metrics->add_subcommand("protgen", "protein generation");
  protgen->add_option("refs", m_refs, "reference FASTA")->required();
  protgen->add_option("hyps", m_hyps, "hypothesis FASTA")->required();
  protgen->add_option("--blosum", m_matrix, "substitution matrix file");
  auto* drug = metrics->add_subcommand("drug", "drug score aggregation");
  drug->add_option("table", m_table, "score table JSONL")->required();
  auto* enzyme =
      metrics->add_subcommand("enzyme", "enzyme score aggregation");
  enzyme->add_option("table", m_table, "score table JSONL")->required();
  auto* joint = metrics->add_subcommand("joint", "joint score aggregation");
  joint->add_option("table", m_table, "score table JSONL")->required();

  auto* plan = app.add_subcommand("plan", "instruction sampling plan");
  int plan_stage = 0;
  std::string plan_table;
  plan->add_option("--stage", plan_stage, "1 or 2")->required();
  plan->add_option("--table", plan_table, "custom ratio table JSON");

  auto* sample = app.add_subcommand("sample", "draw a task stream");
  std::string sample_plan;
  std::uint64_t sample_seed = 0;
  std::size_t sample_n = 0;
  sample->add_option("--plan", sample_plan, "plan JSON file")->required();
  sample->add_option("--seed", sample_seed, "stream seed")->required();
  sample->add_option("-n,--count", sample_n, "number of draws")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (tokenize->parsed()) {
      return cmd_tokenize(tok_format, tok_vocab, tok_input, tok_extend,
                          tok_save, out);
    }
    if (detokenize->parsed()) {
      return cmd_detokenize(detok_vocab, detok_input, out);
    }
    if (validate->parsed()) return cmd_validate(val_format, val_input, out);
    if (canon->parsed()) return cmd_canon(canon_input, out);
    if (fingerprint->parsed()) {
      return cmd_fingerprint(fp_format, fp_input, fp_radius, fp_bits, out);
    }
    if (motif->parsed()) return cmd_motif(motif_input, motif_dict, out);
    if (fuse_cmd->parsed()) {
      return cmd_fuse(fuse_input, fuse_weights,
                      fuse_seed_opt->count() > 0
                          ? std::optional<std::uint64_t>(fuse_seed)
                          : std::nullopt,
                      fuse_d, fuse_heads, fuse_layers, fuse_ff, fuse_nq,
                      fuse_dict, out);
    }
    if (metrics->parsed()) {
      if (caption->parsed() || protqa->parsed()) {
        return cmd_metrics_caption(m_refs, m_hyps, workers, csv, out);
      }
      if (molgen->parsed()) {
        return cmd_metrics_molgen(m_refs, m_hyps, m_format, csv, out);
      }
      if (protgen->parsed()) {
        return cmd_metrics_protgen(m_refs, m_hyps, m_matrix, csv, out);
      }
      if (drug->parsed()) return cmd_metrics_drug(m_table, csv, out);
      if (enzyme->parsed()) return cmd_metrics_enzyme(m_table, csv, out);
      if (joint->parsed()) return cmd_metrics_joint(m_table, csv, out);
    }
    if (plan->parsed()) return cmd_plan(plan_stage, plan_table, out);
    if (sample->parsed()) {
      return cmd_sample(sample_plan, sample_seed, sample_n, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace biomol::cli

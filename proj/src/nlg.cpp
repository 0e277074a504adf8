//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <thread>

#include "biomol/metrics.hpp"

namespace biomol {

namespace {

constexpr double kBleuEpsilon = 1e-9;

using Tokens = std::vector<std::string>;

// n-gram multiset keyed by separator-joined tokens.
std::map<std::string, int> ngram_counts(const Tokens& tokens, int n) {
  std::map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k > 0) key += '\x1f';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

int clipped_overlap(const std::map<std::string, int>& ref,
                    const std::map<std::string, int>& hyp) {
  int overlap = 0;
  for (const auto& [gram, count] : hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t above = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diagonal + 1
                                    : std::max(row[j], row[j - 1]);
      diagonal = above;
    }
  }
  return row[b.size()];
}

double f1(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double rouge_n(const Tokens& ref, const Tokens& hyp, int n) {
  auto ref_counts = ngram_counts(ref, n);
  auto hyp_counts = ngram_counts(hyp, n);
  int ref_total = 0;
  for (const auto& [gram, count] : ref_counts) ref_total += count;
  int hyp_total = 0;
  for (const auto& [gram, count] : hyp_counts) hyp_total += count;
  if (ref_total == 0 || hyp_total == 0) return 0.0;
  int overlap = clipped_overlap(ref_counts, hyp_counts);
  return 100.0 * f1(overlap / static_cast<double>(hyp_total),
                    overlap / static_cast<double>(ref_total));
}

double rouge_l(const Tokens& ref, const Tokens& hyp) {
  if (ref.empty() || hyp.empty()) return 0.0;
  double lcs = static_cast<double>(lcs_length(ref, hyp));
  return 100.0 * f1(lcs / static_cast<double>(hyp.size()),
                    lcs / static_cast<double>(ref.size()));
}

// Exact-match unigram METEOR. Chunks are counted on a greedy alignment
// that repeatedly takes the longest contiguous common fragment over the
// still-unmatched positions (ties: earliest hypothesis start, then
// earliest reference start).
double meteor(const Tokens& ref, const Tokens& hyp) {
  if (ref.empty() || hyp.empty()) return 0.0;
  std::vector<bool> ref_used(ref.size(), false);
  std::vector<bool> hyp_used(hyp.size(), false);
  int matches = 0;
  int chunks = 0;
  while (true) {
    std::size_t best_len = 0;
    std::size_t best_h = 0;
    std::size_t best_r = 0;
    for (std::size_t h = 0; h < hyp.size(); ++h) {
      if (hyp_used[h]) continue;
      for (std::size_t r = 0; r < ref.size(); ++r) {
        if (ref_used[r]) continue;
        std::size_t len = 0;
        while (h + len < hyp.size() && r + len < ref.size() &&
               !hyp_used[h + len] && !ref_used[r + len] &&
               hyp[h + len] == ref[r + len]) {
          ++len;
        }
        if (len > best_len) {
          best_len = len;
          best_h = h;
          best_r = r;
        }
      }
    }
    if (best_len == 0) break;
    for (std::size_t k = 0; k < best_len; ++k) {
      hyp_used[best_h + k] = true;
      ref_used[best_r + k] = true;
    }
    matches += static_cast<int>(best_len);
    ++chunks;
  }
  if (matches == 0) return 0.0;
  double precision = matches / static_cast<double>(hyp.size());
  double recall = matches / static_cast<double>(ref.size());
  double fmean =
      10.0 * precision * recall / (recall + 9.0 * precision);
  double fragmentation = chunks / static_cast<double>(matches);
  double penalty = 0.5 * fragmentation * fragmentation * fragmentation;
  return 100.0 * fmean * (1.0 - penalty);
}

}  // namespace

std::vector<std::string> tokenize_text(std::string_view text) {
  Tokens tokens;
  std::string current;
  for (char raw : text) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      current.push_back(
          static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double corpus_bleu(const std::vector<Tokens>& references,
                   const std::vector<Tokens>& hypotheses, int max_order) {
  if (references.size() != hypotheses.size()) {
    throw Error(ErrorKind::kLengthMismatch, "corpus sizes differ");
  }
  if (references.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "empty corpus");
  }
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;
  std::vector<long> matched(max_order, 0);
  std::vector<long> total(max_order, 0);
  for (std::size_t i = 0; i < references.size(); ++i) {
    ref_len += references[i].size();
    hyp_len += hypotheses[i].size();
    for (int n = 1; n <= max_order; ++n) {
      auto ref_counts = ngram_counts(references[i], n);
      auto hyp_counts = ngram_counts(hypotheses[i], n);
      for (const auto& [gram, count] : hyp_counts) total[n - 1] += count;
      matched[n - 1] += clipped_overlap(ref_counts, hyp_counts);
    }
  }
  if (hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < max_order; ++n) {
    double p = total[n] == 0
                   ? kBleuEpsilon
                   : (matched[n] > 0
                          ? matched[n] / static_cast<double>(total[n])
                          : kBleuEpsilon / static_cast<double>(total[n]));
    log_sum += std::log(p) / max_order;
  }
  double brevity =
      hyp_len >= ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) /
                               static_cast<double>(hyp_len));
  return 100.0 * brevity * std::exp(log_sum);
}

MetricReport nlg_metrics(const std::vector<std::string>& references,
                         const std::vector<std::string>& hypotheses,
                         int workers) {
  if (references.size() != hypotheses.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                std::to_string(references.size()) + " references vs " +
                    std::to_string(hypotheses.size()) + " hypotheses");
  }
  if (references.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "no pairs to score");
  }
  const std::size_t n = references.size();
  std::vector<Tokens> ref_tokens(n);
  std::vector<Tokens> hyp_tokens(n);
  for (std::size_t i = 0; i < n; ++i) {
    ref_tokens[i] = tokenize_text(references[i]);
    hyp_tokens[i] = tokenize_text(hypotheses[i]);
  }

  struct PairScores {
    double bleu2, bleu4, rouge1, rouge2, rougeL, meteor_v;
  };
  std::vector<PairScores> scores(n);
  auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      scores[i].bleu2 = corpus_bleu({ref_tokens[i]}, {hyp_tokens[i]}, 2);
      scores[i].bleu4 = corpus_bleu({ref_tokens[i]}, {hyp_tokens[i]}, 4);
      scores[i].rouge1 = rouge_n(ref_tokens[i], hyp_tokens[i], 1);
      scores[i].rouge2 = rouge_n(ref_tokens[i], hyp_tokens[i], 2);
      scores[i].rougeL = rouge_l(ref_tokens[i], hyp_tokens[i]);
      scores[i].meteor_v = meteor(ref_tokens[i], hyp_tokens[i]);
    }
  };
  if (workers <= 1) {
    score_range(0, n);
  } else {
    std::vector<std::thread> pool;
    std::size_t per = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      std::size_t begin = std::min(n, w * per);
      std::size_t end = std::min(n, begin + per);
      if (begin < end) pool.emplace_back(score_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  MetricReport report;
  for (std::size_t i = 0; i < n; ++i) {
    std::string id = std::to_string(i);
    report.pairs.push_back({id, id, "bleu2", scores[i].bleu2});
    report.pairs.push_back({id, id, "bleu4", scores[i].bleu4});
    report.pairs.push_back({id, id, "rouge1", scores[i].rouge1});
    report.pairs.push_back({id, id, "rouge2", scores[i].rouge2});
    report.pairs.push_back({id, id, "rougeL", scores[i].rougeL});
    report.pairs.push_back({id, id, "meteor", scores[i].meteor_v});
  }
  // mean and population standard deviation over the per-pair scores;
  // BLEU aggregates are corpus-pooled instead
  auto summarize = [&](const char* name, auto select) {
    double mean = 0.0;
    for (const auto& s : scores) mean += select(s);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& s : scores) {
      var += (select(s) - mean) * (select(s) - mean);
    }
    report.aggregates[name] = mean;
    report.aggregates[std::string(name) + "_std"] =
        std::sqrt(var / static_cast<double>(n));
  };
  summarize("rouge1", [](const PairScores& s) { return s.rouge1; });
  summarize("rouge2", [](const PairScores& s) { return s.rouge2; });
  summarize("rougeL", [](const PairScores& s) { return s.rougeL; });
  summarize("meteor", [](const PairScores& s) { return s.meteor_v; });
  report.aggregates["bleu2"] = corpus_bleu(ref_tokens, hyp_tokens, 2);
  report.aggregates["bleu4"] = corpus_bleu(ref_tokens, hyp_tokens, 4);
  return report;
}

}  // namespace biomol

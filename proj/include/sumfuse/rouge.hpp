// Copyright 2026 The Sumfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUMFUSE_ROUGE_HPP_
#define SUMFUSE_ROUGE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sumfuse/corpus.hpp"
#include "sumfuse/textprep.hpp"

namespace sumfuse {

/// Evaluation settings. Defaults mirror the conventional fixed setup:
/// n in {1,2,4}, Porter stemming on, stopwords kept, 100-word truncation,
/// recall averaged over references, 95% bootstrap over 1000 resamples.
struct RougeConfig {
  std::vector<int> n_values = {1, 2, 4};
  bool stemming = true;
  bool keep_stopwords = true;
  int truncate_words = 100;
  enum class MultiRef { average, best };
  MultiRef multi_ref = MultiRef::average;
  int bootstrap_resamples = 1000;
  double confidence = 0.95;

  std::string fingerprint() const {
    std::string f = "rouge";
    for (int n : n_values) f += "-n" + std::to_string(n);
    f += stemming ? "-stem" : "-nostem";
    f += keep_stopwords ? "-stop" : "-nostop";
    f += "-l" + std::to_string(truncate_words);
    f += multi_ref == MultiRef::average ? "-avg" : "-best";
    return f;
  }
};

struct RougeScore {
  int n = 1;
  double recall = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::string cluster_id;
  std::string system_id;
  std::string config_fingerprint;
};

namespace detail {

// Tokens as ROUGE sees them: tokenize, truncate (peer only), optionally
// stem, optionally drop stopwords.
inline std::vector<std::string> rouge_tokens(std::string_view text,
                                             const RougeConfig& cfg,
                                             bool truncate) {
  std::vector<std::string> toks = tokenize(text);
  if (truncate && static_cast<int>(toks.size()) > cfg.truncate_words)
    toks.resize(cfg.truncate_words);
  std::vector<std::string> out;
  out.reserve(toks.size());
  for (auto& t : toks) {
    if (!cfg.keep_stopwords && is_stopword(t)) continue;
    out.push_back(cfg.stemming ? porter_stem(t) : std::move(t));
  }
  return out;
}

inline std::map<std::string, long> ngram_counts(
    const std::vector<std::string>& toks, int n) {
  std::map<std::string, long> counts;
  if (static_cast<int>(toks.size()) >= n) {
    for (size_t i = 0; i + n <= toks.size(); ++i) {
      std::string g = toks[i];
      for (int k = 1; k < n; ++k) {
        g += '\x1f';
        g += toks[i + k];
      }
      ++counts[g];
    }
  }
  return counts;
}

}  // namespace detail

/// Clipped n-gram recall of `peer` against `references`.
inline RougeScore rouge_n(std::string_view peer,
                          const std::vector<std::string>& references, int n,
                          const RougeConfig& cfg = {},
                          std::vector<std::string>* warnings = nullptr) {
  if (references.empty()) throw DataError("rouge_n: empty reference set");
  if (n < 1) throw DataError("rouge_n: n must be >= 1");
  if (cfg.truncate_words < 1)
    throw DataError("rouge_n: truncate_words must be >= 1");

  auto peer_counts =
      detail::ngram_counts(detail::rouge_tokens(peer, cfg, true), n);

  double acc = 0.0;
  bool have_best = false;
  for (const auto& ref : references) {
    auto ref_counts =
        detail::ngram_counts(detail::rouge_tokens(ref, cfg, false), n);
    long ref_total = 0;
    for (const auto& [g, c] : ref_counts) ref_total += c;
    double recall = 0.0;
    if (ref_total == 0) {
      if (warnings)
        warnings->push_back("reference with no " + std::to_string(n) +
                            "-grams contributes recall 0");
    } else {
      long matched = 0;
      for (const auto& [g, c] : peer_counts) {
        auto it = ref_counts.find(g);
        if (it != ref_counts.end()) matched += std::min(c, it->second);
      }
      recall = static_cast<double>(matched) / static_cast<double>(ref_total);
    }
    if (cfg.multi_ref == RougeConfig::MultiRef::average) {
      acc += recall;
    } else {
      acc = have_best ? std::max(acc, recall) : recall;
      have_best = true;
    }
  }
  RougeScore score;
  score.n = n;
  score.recall = cfg.multi_ref == RougeConfig::MultiRef::average
                     ? acc / static_cast<double>(references.size())
                     : acc;
  score.config_fingerprint = cfg.fingerprint();
  return score;
}

// ---------------------------------------------------------------------------
// Bootstrap confidence interval
// ---------------------------------------------------------------------------

/// Percentile bootstrap over cluster resampling. Deterministic for a fixed
/// seed: mt19937_64 with modulo index selection, percentile by rank on the
/// sorted resampled means (floor for the low end, ceil for the high end).
inline std::pair<double, double> bootstrap_ci(
    const std::vector<double>& per_cluster_scores, int resamples,
    double confidence, std::uint64_t seed) {
  if (per_cluster_scores.size() < 2)
    throw DataError("bootstrap_ci needs >= 2 per-cluster scores");
  if (resamples < 1) throw DataError("bootstrap_ci: resamples must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw DataError("bootstrap_ci: confidence must be in (0, 1)");

  const size_t n = per_cluster_scores.size();
  std::mt19937_64 rng(seed);
  std::vector<double> means;
  means.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i)
      sum += per_cluster_scores[rng() % n];
    means.push_back(sum / static_cast<double>(n));
  }
  std::sort(means.begin(), means.end());
  double q_low = (1.0 - confidence) / 2.0;
  double q_high = 1.0 - q_low;
  size_t last = means.size() - 1;
  size_t lo = static_cast<size_t>(std::floor(q_low * last));
  size_t hi = static_cast<size_t>(std::ceil(q_high * last));
  return {means[lo], means[hi]};
}

// ---------------------------------------------------------------------------
// Sign test
// ---------------------------------------------------------------------------

struct SignTestResult {
  double p_value = 1.0;
  int wins_a = 0;
  int wins_b = 0;
  int ties = 0;
};

/// Two-sided exact sign test over paired per-cluster scores. Ties are
/// dropped; p = 2 * min binomial tail at p0 = 0.5, clipped at 1.
inline SignTestResult sign_test(const std::vector<double>& a,
                                const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw DataError("sign_test: score lists must be nonempty and aligned");
  SignTestResult r;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i])
      ++r.wins_a;
    else if (b[i] > a[i])
      ++r.wins_b;
    else
      ++r.ties;
  }
  int n = r.wins_a + r.wins_b;
  if (n == 0) {
    r.p_value = 1.0;
    return r;
  }
  int k = std::min(r.wins_a, r.wins_b);
  // P(X <= k), X ~ Binomial(n, 1/2), exact
  long double tail = 0.0L;
  long double coeff = 1.0L;  // C(n, 0)
  for (int i = 0; i <= k; ++i) {
    tail += coeff;
    coeff = coeff * (n - i) / (i + 1);
  }
  long double p = 2.0L * tail * std::pow(0.5L, n);
  r.p_value = static_cast<double>(std::min<long double>(p, 1.0L));
  return r;
}

// ---------------------------------------------------------------------------
// Corpus-level evaluation
// ---------------------------------------------------------------------------

struct ScoreRow {
  std::string system_id;
  int n = 1;
  double recall = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int clusters_covered = 0;
};

/// Mean per-system recall over all clusters the system covers, one row per
/// (system, n). `summaries` maps system id -> cluster id -> summary text.
/// Per-cluster scores are also returned for significance testing.
struct CorpusEvaluation {
  std::vector<ScoreRow> table;
  // (system, n) -> cluster id -> recall, ordered by cluster id
  std::map<std::pair<std::string, int>, std::map<std::string, double>>
      per_cluster;
};

inline CorpusEvaluation evaluate_corpus(
    const std::vector<DocumentCluster>& clusters,
    const std::map<std::string, std::map<std::string, std::string>>&
        summaries,
    const RougeConfig& cfg = {}, std::uint64_t seed = 1,
    std::vector<std::string>* warnings = nullptr) {
  CorpusEvaluation ev;
  for (const auto& [system_id, per_cluster_text] : summaries) {
    for (int n : cfg.n_values) {
      std::map<std::string, double> scores;
      for (const auto& cluster : clusters) {
        if (cluster.references.empty())
          throw DataError("cluster has no references: " + cluster.id);
        auto it = per_cluster_text.find(cluster.id);
        if (it == per_cluster_text.end()) {
          if (warnings)
            warnings->push_back("system " + system_id +
                                " missing cluster " + cluster.id);
          continue;
        }
        std::vector<std::string> refs;
        for (const auto& r : cluster.references) refs.push_back(r.text);
        scores[cluster.id] = rouge_n(it->second, refs, n, cfg, warnings).recall;
      }
      ScoreRow row;
      row.system_id = system_id;
      row.n = n;
      row.clusters_covered = static_cast<int>(scores.size());
      if (!scores.empty()) {
        double sum = 0.0;
        std::vector<double> vals;
        for (const auto& [cid, v] : scores) {
          sum += v;
          vals.push_back(v);
        }
        row.recall = sum / static_cast<double>(vals.size());
        if (vals.size() >= 2 && cfg.bootstrap_resamples >= 1) {
          auto [lo, hi] = bootstrap_ci(vals, cfg.bootstrap_resamples,
                                       cfg.confidence, seed);
          row.ci_low = lo;
          row.ci_high = hi;
        } else {
          row.ci_low = row.ci_high = row.recall;
        }
      }
      ev.per_cluster[{system_id, n}] = std::move(scores);
      ev.table.push_back(row);
    }
  }
  return ev;
}

}  // namespace sumfuse

#endif  // SUMFUSE_ROUGE_HPP_

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

#ifndef SUMFUSE_CANDIDATES_HPP_
#define SUMFUSE_CANDIDATES_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumfuse/corpus.hpp"
#include "sumfuse/pagerank.hpp"
#include "sumfuse/similarity.hpp"
#include "sumfuse/textprep.hpp"

namespace sumfuse {

/// Ranked sentence list for one cluster produced by one system. Scores are
/// non-increasing in list order.
struct SentenceRanking {
  std::string cluster_id;
  std::string system_id;
  std::vector<std::pair<SentenceId, double>> ranked;
};

namespace detail {

inline SentenceRanking make_ranking(
    const DocumentCluster& cluster, const std::string& system_id,
    std::vector<std::pair<SentenceId, double>> scored) {
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  return SentenceRanking{cluster.id, system_id, std::move(scored)};
}

inline std::vector<TermVector> sentence_vectors(
    const std::vector<const Sentence*>& sentences,
    const VectorOptions& opts = {}) {
  std::vector<TermVector> v;
  v.reserve(sentences.size());
  for (const auto* s : sentences)
    v.push_back(build_term_vector(s->clean_text, opts));
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// LexRank
// ---------------------------------------------------------------------------

struct LexRankParams {
  double damping = 0.85;
  double sim_threshold = 0.1;
  double tol = 1e-6;
  int max_iter = 100;
};

/// PageRank over the binary sentence-similarity graph (cosine >= threshold).
inline SentenceRanking lexrank(const DocumentCluster& cluster,
                               const LexRankParams& params = {}) {
  auto sentences = cluster.all_sentences();
  const size_t n = sentences.size();
  auto vecs = detail::sentence_vectors(sentences);

  std::vector<std::vector<double>> adj(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (cosine(vecs[i], vecs[j]) >= params.sim_threshold)
        adj[i][j] = adj[j][i] = 1.0;

  auto scores = pagerank(column_normalize(std::move(adj)), params.damping,
                         params.tol, params.max_iter);

  std::vector<std::pair<SentenceId, double>> scored;
  for (size_t i = 0; i < n; ++i) scored.emplace_back(sentences[i]->id, scores[i]);
  return detail::make_ranking(cluster, "lexrank", std::move(scored));
}

// ---------------------------------------------------------------------------
// FreqSum
// ---------------------------------------------------------------------------

/// Word-probability ranking: a sentence scores the mean corpus probability
/// of its content words. Stopwords are excluded throughout.
inline SentenceRanking freqsum(const DocumentCluster& cluster) {
  VectorOptions opts;
  auto sentences = cluster.all_sentences();
  std::map<std::string, double> counts;
  double total = 0.0;
  std::vector<std::vector<std::string>> sent_tokens;
  sent_tokens.reserve(sentences.size());
  for (const auto* s : sentences) {
    auto toks = content_tokens(tokenize(s->clean_text), opts);
    for (const auto& t : toks) {
      counts[t] += 1.0;
      total += 1.0;
    }
    sent_tokens.push_back(std::move(toks));
  }
  std::vector<std::pair<SentenceId, double>> scored;
  for (size_t i = 0; i < sentences.size(); ++i) {
    const auto& toks = sent_tokens[i];
    double score = 0.0;
    if (!toks.empty() && total > 0.0) {
      for (const auto& t : toks) score += counts[t] / total;
      score /= static_cast<double>(toks.size());
    }
    scored.emplace_back(sentences[i]->id, score);
  }
  return detail::make_ranking(cluster, "freqsum", std::move(scored));
}

// ---------------------------------------------------------------------------
// TsSum
// ---------------------------------------------------------------------------

/// Log-likelihood ratio of a word appearing k1/n1 times in the foreground
/// and k2/n2 times in the background, against a shared rate. The classic
/// 2x2 contingency statistic (-2 log lambda).
inline double log_likelihood_ratio(double k1, double n1, double k2,
                                   double n2) {
  auto ll = [](double k, double n, double x) {
    double s = 0.0;
    if (k > 0.0 && x > 0.0) s += k * std::log(x);
    if (n - k > 0.0 && x < 1.0) s += (n - k) * std::log(1.0 - x);
    return s;
  };
  if (n1 <= 0.0 || n2 <= 0.0) return 0.0;
  double p1 = k1 / n1;
  double p2 = k2 / n2;
  double p = (k1 + k2) / (n1 + n2);
  return 2.0 * (ll(k1, n1, p1) + ll(k2, n2, p2) - ll(k1, n1, p) -
                ll(k2, n2, p));
}

/// Topic-signature ranking: a sentence scores (signature tokens) / (sentence
/// length). Signatures are stems over-represented in the cluster relative to
/// `background` with LLR above `llr_threshold`.
inline SentenceRanking tssum(const DocumentCluster& cluster,
                             const std::map<std::string, double>& background,
                             double llr_threshold = 10.83) {
  if (background.empty()) throw DataError("tssum requires a background corpus");
  if (!(llr_threshold > 0.0))
    throw DataError("llr_threshold must be > 0");
  VectorOptions opts;
  auto sentences = cluster.all_sentences();
  std::map<std::string, double> counts;
  double n1 = 0.0;
  std::vector<std::vector<std::string>> sent_tokens;
  for (const auto* s : sentences) {
    auto toks = content_tokens(tokenize(s->clean_text), opts);
    for (const auto& t : toks) {
      counts[t] += 1.0;
      n1 += 1.0;
    }
    sent_tokens.push_back(std::move(toks));
  }
  double n2 = 0.0;
  for (const auto& [w, c] : background) n2 += c;

  std::map<std::string, bool> signature;
  for (const auto& [w, k1] : counts) {
    auto it = background.find(w);
    double k2 = it == background.end() ? 0.0 : it->second;
    bool over = (n2 > 0.0) && (k1 / n1 > k2 / n2);
    signature[w] =
        over && log_likelihood_ratio(k1, n1, k2, n2) > llr_threshold;
  }

  std::vector<std::pair<SentenceId, double>> scored;
  for (size_t i = 0; i < sentences.size(); ++i) {
    double sig = 0.0;
    for (const auto& t : sent_tokens[i])
      if (signature[t]) sig += 1.0;
    double len = static_cast<double>(sentences[i]->word_count);
    scored.emplace_back(sentences[i]->id, len > 0.0 ? sig / len : 0.0);
  }
  return detail::make_ranking(cluster, "tssum", std::move(scored));
}

/// Parse a "stem count" per line background-count file.
inline std::map<std::string, double> load_background_counts(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open background counts: " + path.string());
  std::map<std::string, double> counts;
  std::string word;
  double count;
  while (in >> word >> count) counts[word] += count;
  return counts;
}

// ---------------------------------------------------------------------------
// Greedy-KL
// ---------------------------------------------------------------------------

namespace detail {

// KL(summary || cluster) over the cluster vocabulary with additive
// smoothing, natural log.
inline double kl_to_cluster(const std::map<std::string, double>& summary,
                            double summary_total,
                            const std::map<std::string, double>& cluster,
                            double cluster_total, double eps) {
  const double v = static_cast<double>(cluster.size());
  double st = summary_total + eps * v;
  double ct = cluster_total + eps * v;
  double d = 0.0;
  for (const auto& [w, cw] : cluster) {
    auto it = summary.find(w);
    double sw = it == summary.end() ? 0.0 : it->second;
    double ps = (sw + eps) / st;
    double pc = (cw + eps) / ct;
    d += ps * std::log(ps / pc);
  }
  return d;
}

}  // namespace detail

/// Greedily appends the sentence that minimizes KL(summary || cluster)
/// until no remaining sentence fits in the word budget. The returned
/// ranking is in selection order.
inline SentenceRanking greedy_kl(const DocumentCluster& cluster,
                                 int budget_words, double eps = 0.001) {
  if (budget_words < 1) throw DataError("budget_words must be >= 1");
  VectorOptions opts;
  auto sentences = cluster.all_sentences();
  const size_t n = sentences.size();

  std::vector<std::vector<std::string>> sent_tokens(n);
  std::map<std::string, double> cluster_counts;
  double cluster_total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sent_tokens[i] = content_tokens(tokenize(sentences[i]->clean_text), opts);
    for (const auto& t : sent_tokens[i]) {
      cluster_counts[t] += 1.0;
      cluster_total += 1.0;
    }
  }

  std::map<std::string, double> summary_counts;
  double summary_total = 0.0;
  int used_words = 0;
  std::vector<bool> taken(n, false);
  std::vector<size_t> selection;

  while (true) {
    double best_kl = 0.0;
    size_t best = n;
    for (size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (used_words + sentences[i]->word_count > budget_words) continue;
      auto trial = summary_counts;
      double trial_total = summary_total;
      for (const auto& t : sent_tokens[i]) {
        trial[t] += 1.0;
        trial_total += 1.0;
      }
      double d = detail::kl_to_cluster(trial, trial_total, cluster_counts,
                                       cluster_total, eps);
      // strict < keeps the lowest sentence id on ties
      if (best == n || d < best_kl - 1e-12) {
        best_kl = d;
        best = i;
      }
    }
    if (best == n) break;
    taken[best] = true;
    selection.push_back(best);
    used_words += sentences[best]->word_count;
    for (const auto& t : sent_tokens[best]) {
      summary_counts[t] += 1.0;
      summary_total += 1.0;
    }
  }

  std::vector<std::pair<SentenceId, double>> ranked;
  for (size_t i = 0; i < selection.size(); ++i)
    ranked.emplace_back(sentences[selection[i]]->id,
                        static_cast<double>(selection.size() - i));
  return SentenceRanking{cluster.id, "greedykl", std::move(ranked)};
}

// ---------------------------------------------------------------------------
// Ranking -> summary
// ---------------------------------------------------------------------------

/// Walk a ranking in order, skipping sentences that are > dedup_threshold
/// cosine-similar to anything already selected, and skipping (not stopping
/// at) sentences that would overflow the word budget.
inline CandidateSummary rank_to_summary(const SentenceRanking& ranking,
                                        const DocumentCluster& cluster,
                                        int budget_words,
                                        double dedup_threshold = 0.5) {
  if (budget_words < 1) throw DataError("budget_words must be >= 1");
  if (!(dedup_threshold > 0.0 && dedup_threshold <= 1.0))
    throw DataError("dedup_threshold must be in (0, 1]");
  CandidateSummary out;
  out.system_id = ranking.system_id;
  out.cluster_id = cluster.id;
  out.source = SummarySource::native;

  std::vector<TermVector> selected_vecs;
  int used = 0;
  for (const auto& [id, score] : ranking.ranked) {
    const Sentence* s = cluster.find(id);
    if (s == nullptr)
      throw DataError("ranking references unknown sentence id in cluster " +
                      cluster.id);
    if (used + s->word_count > budget_words) continue;
    TermVector v = build_term_vector(s->clean_text);
    bool dup = false;
    for (const auto& sv : selected_vecs) {
      if (cosine(v, sv) > dedup_threshold) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    out.sentences.push_back(*s);
    selected_vecs.push_back(std::move(v));
    used += s->word_count;
  }
  return out;
}

}  // namespace sumfuse

#endif  // SUMFUSE_CANDIDATES_HPP_

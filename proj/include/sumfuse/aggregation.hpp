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

#ifndef SUMFUSE_AGGREGATION_HPP_
#define SUMFUSE_AGGREGATION_HPP_

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumfuse/candidates.hpp"
#include "sumfuse/corpus.hpp"
#include "sumfuse/pagerank.hpp"
#include "sumfuse/similarity.hpp"

namespace sumfuse {

/// Per-candidate scalar weights: global reputation, local per-cluster
/// reputation, or their convex combination.
struct SystemWeights {
  enum class Kind { global, local, hybrid, uniform };
  Kind kind = Kind::uniform;
  std::map<std::string, double> weights;

  double at(const std::string& system_id) const {
    auto it = weights.find(system_id);
    if (it == weights.end())
      throw DataError("no weight for system: " + system_id);
    return it->second;
  }

  static SystemWeights uniform_for(
      const std::vector<CandidateSummary>& candidates, double value = 1.0) {
    SystemWeights w;
    w.kind = Kind::uniform;
    for (const auto& c : candidates) w.weights[c.system_id] = value;
    return w;
  }
};

/// A candidate sentence with provenance and its fused consensus score.
struct ScoredSentence {
  Sentence sentence;
  std::string origin_system;
  int origin_position = 0;  // index within the origin candidate summary
  double score = 0.0;
};

struct AggregationConfig {
  double alpha = 0.3;
  SimilarityMeasure measure;
  double dedup_threshold = 0.5;
  int budget_words = 100;
  double damping = 0.85;
  double tol = 1e-6;
  int max_iter = 100;
};

namespace detail {

inline void require_candidates(const std::vector<CandidateSummary>& cs) {
  if (cs.size() < 2)
    throw DataError("consensus aggregation needs >= 2 candidate summaries");
  for (const auto& c : cs) {
    if (c.sentences.empty())
      throw DataError("candidate summary is empty: " + c.system_id);
    if (c.cluster_id != cs.front().cluster_id)
      throw DataError("candidates span multiple clusters");
  }
}

// Per-candidate, per-sentence text representations under the default
// vector options.
inline std::vector<std::vector<TextRep>> candidate_reps(
    const std::vector<CandidateSummary>& cs) {
  std::vector<std::vector<TextRep>> reps(cs.size());
  for (size_t j = 0; j < cs.size(); ++j) {
    reps[j].reserve(cs[j].sentences.size());
    for (const auto& s : cs[j].sentences)
      reps[j].push_back(TextRep::build(s.clean_text));
  }
  return reps;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Consensus sentence scoring
// ---------------------------------------------------------------------------

/// Weighted consensus score: for each sentence s in candidate j,
///   score(s) = sum over systems k != j of weight(k) * max over sentences
///   l in candidate k of Sim(s, s_lk).
/// The weight multiplies the matched system's contribution. Results are in
/// candidate order, then sentence order; sorting happens at assembly.
inline std::vector<ScoredSentence> weighted_sentence_scores(
    const std::vector<CandidateSummary>& candidates,
    const SystemWeights& weights, const SimilarityMeasure& measure = {}) {
  detail::require_candidates(candidates);
  for (const auto& c : candidates) (void)weights.at(c.system_id);

  auto reps = detail::candidate_reps(candidates);
  std::vector<ScoredSentence> out;
  for (size_t j = 0; j < candidates.size(); ++j) {
    for (size_t i = 0; i < candidates[j].sentences.size(); ++i) {
      double score = 0.0;
      for (size_t k = 0; k < candidates.size(); ++k) {
        if (k == j) continue;
        double best = 0.0;
        for (size_t l = 0; l < candidates[k].sentences.size(); ++l)
          best = std::max(best, similarity(reps[j][i], reps[k][l], measure));
        score += weights.at(candidates[k].system_id) * best;
      }
      out.push_back(ScoredSentence{candidates[j].sentences[i],
                                   candidates[j].system_id,
                                   static_cast<int>(i), score});
    }
  }
  return out;
}

/// Unweighted consensus: sum of best-match similarities against every other
/// candidate. Identical to weighted_sentence_scores with all weights 1.
inline std::vector<ScoredSentence> sent_rank_scores(
    const std::vector<CandidateSummary>& candidates,
    const SimilarityMeasure& measure = {}) {
  detail::require_candidates(candidates);
  return weighted_sentence_scores(
      candidates, SystemWeights::uniform_for(candidates), measure);
}

// ---------------------------------------------------------------------------
// System weights
// ---------------------------------------------------------------------------

/// Per-cluster reputation: damped PageRank over the complete candidate
/// graph with whole-summary similarity edges (no self-loops), normalized to
/// sum 1. A fully disconnected graph falls back to uniform with a warning.
inline SystemWeights local_rank_weights(
    const std::vector<CandidateSummary>& candidates,
    const SimilarityMeasure& measure = {}, double damping = 0.85,
    double tol = 1e-6, int max_iter = 100,
    std::vector<std::string>* warnings = nullptr) {
  detail::require_candidates(candidates);
  const size_t n = candidates.size();

  std::vector<TextRep> reps;
  reps.reserve(n);
  for (const auto& c : candidates)
    reps.push_back(TextRep::build(c.concatenated_text()));

  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sim[i][j] = similarity(reps[i], reps[j], measure);
      total += sim[i][j];
    }
  }

  SystemWeights w;
  w.kind = SystemWeights::Kind::local;
  if (total <= 0.0) {
    if (warnings)
      warnings->push_back(
          "candidate similarity graph is disconnected; using uniform local "
          "weights for cluster " + candidates.front().cluster_id);
    for (const auto& c : candidates)
      w.weights[c.system_id] = 1.0 / static_cast<double>(n);
    return w;
  }

  auto scores =
      pagerank(column_normalize(std::move(sim)), damping, tol, max_iter);
  double sum = 0.0;
  for (double s : scores) sum += s;
  for (size_t i = 0; i < n; ++i)
    w.weights[candidates[i].system_id] = scores[i] / sum;
  return w;
}

/// H(k) = alpha * L(k) + (1 - alpha) * G(k).
inline SystemWeights hybrid_weights(const SystemWeights& local,
                                    const SystemWeights& global_w,
                                    double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DataError("alpha must be in [0, 1]");
  std::set<std::string> a, b;
  for (const auto& [k, v] : local.weights) a.insert(k);
  for (const auto& [k, v] : global_w.weights) b.insert(k);
  if (a != b) throw DataError("hybrid_weights: mismatched system sets");
  SystemWeights h;
  h.kind = SystemWeights::Kind::hybrid;
  for (const auto& [k, l] : local.weights)
    h.weights[k] = alpha * l + (1.0 - alpha) * global_w.weights.at(k);
  return h;
}

// ---------------------------------------------------------------------------
// Positional baselines
// ---------------------------------------------------------------------------

namespace detail {

inline void validate_rankings(const std::vector<SentenceRanking>& rankings) {
  if (rankings.size() < 2)
    throw DataError("positional aggregation needs >= 2 rankings");
  for (const auto& r : rankings) {
    std::set<SentenceId> seen;
    for (const auto& [id, score] : r.ranked) {
      if (!seen.insert(id).second)
        throw DataError("duplicate sentence within one ranking: " +
                        r.system_id);
    }
  }
}

inline std::set<SentenceId> ranking_universe(
    const std::vector<SentenceRanking>& rankings) {
  std::set<SentenceId> u;
  for (const auto& r : rankings)
    for (const auto& [id, score] : r.ranked) u.insert(id);
  return u;
}

inline SentenceRanking sort_by_points(
    const std::vector<SentenceRanking>& rankings,
    const std::map<SentenceId, double>& points, const std::string& name) {
  std::vector<std::pair<SentenceId, double>> out(points.begin(), points.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return SentenceRanking{rankings.front().cluster_id, name, std::move(out)};
}

}  // namespace detail

/// Borda count over a shared universe; each list awards (m - position)
/// points with m the universe size, unranked sentences get 0.
inline SentenceRanking borda(const std::vector<SentenceRanking>& rankings,
                             const std::set<SentenceId>* universe = nullptr) {
  detail::validate_rankings(rankings);
  std::set<SentenceId> u =
      universe ? *universe : detail::ranking_universe(rankings);
  const double m = static_cast<double>(u.size());
  std::map<SentenceId, double> points;
  for (SentenceId id : u) points[id] = 0.0;
  for (const auto& r : rankings) {
    for (size_t pos = 0; pos < r.ranked.size(); ++pos)
      points[r.ranked[pos].first] += m - static_cast<double>(pos);
  }
  return detail::sort_by_points(rankings, points, "borda");
}

/// Reciprocal-rank fusion: score = sum of 1/position (1-based).
inline SentenceRanking reciprocal_rank(
    const std::vector<SentenceRanking>& rankings,
    const std::set<SentenceId>* universe = nullptr) {
  detail::validate_rankings(rankings);
  std::set<SentenceId> u =
      universe ? *universe : detail::ranking_universe(rankings);
  std::map<SentenceId, double> points;
  for (SentenceId id : u) points[id] = 0.0;
  for (const auto& r : rankings) {
    for (size_t pos = 0; pos < r.ranked.size(); ++pos)
      points[r.ranked[pos].first] += 1.0 / static_cast<double>(pos + 1);
  }
  return detail::sort_by_points(rankings, points, "reciprocal");
}

/// Round robin: cycle through the rankings in system-id order, each
/// contributing its next not-yet-taken sentence.
inline SentenceRanking round_robin(std::vector<SentenceRanking> rankings) {
  detail::validate_rankings(rankings);
  std::sort(rankings.begin(), rankings.end(),
            [](const auto& a, const auto& b) {
              return a.system_id < b.system_id;
            });
  std::set<SentenceId> taken;
  std::vector<size_t> cursor(rankings.size(), 0);
  std::vector<SentenceId> order;
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t r = 0; r < rankings.size(); ++r) {
      const auto& ranked = rankings[r].ranked;
      size_t& c = cursor[r];
      while (c < ranked.size() && taken.count(ranked[c].first)) ++c;
      if (c < ranked.size()) {
        taken.insert(ranked[c].first);
        order.push_back(ranked[c].first);
        ++c;
        progress = true;
      }
    }
  }
  std::vector<std::pair<SentenceId, double>> out;
  for (size_t i = 0; i < order.size(); ++i)
    out.emplace_back(order[i], static_cast<double>(order.size() - i));
  return SentenceRanking{rankings.front().cluster_id, "roundrobin",
                         std::move(out)};
}

/// Map a candidate summary onto cluster sentence ids by clean-text match,
/// yielding a ranking prefix over the cluster universe. Sentences that do
/// not occur in the cluster are dropped with a warning.
inline SentenceRanking candidate_to_ranking(
    const DocumentCluster& cluster, const CandidateSummary& candidate,
    std::vector<std::string>* warnings = nullptr) {
  std::map<std::string, SentenceId> by_text;
  for (const auto* s : cluster.all_sentences())
    by_text.emplace(s->clean_text, s->id);
  std::vector<std::pair<SentenceId, double>> ranked;
  std::set<SentenceId> used;
  const double n = static_cast<double>(candidate.sentences.size());
  for (size_t i = 0; i < candidate.sentences.size(); ++i) {
    auto it = by_text.find(candidate.sentences[i].clean_text);
    if (it == by_text.end() || used.count(it->second)) {
      if (it == by_text.end() && warnings)
        warnings->push_back("candidate sentence not found in cluster " +
                            cluster.id + " (system " + candidate.system_id +
                            ")");
      continue;
    }
    used.insert(it->second);
    ranked.emplace_back(it->second, n - static_cast<double>(i));
  }
  return SentenceRanking{cluster.id, candidate.system_id, std::move(ranked)};
}

// ---------------------------------------------------------------------------
// Final assembly
// ---------------------------------------------------------------------------

/// Sort scored sentences (score desc, then origin-system weight desc, then
/// system id and position), then greedily select under the word budget,
/// skipping near-duplicates (cosine > dedup_threshold) and overflowing
/// sentences.
inline CandidateSummary assemble_summary(
    std::vector<ScoredSentence> scored, const AggregationConfig& config,
    const std::string& method_name, const SystemWeights* weights = nullptr,
    const std::string& cluster_id = {}) {
  if (scored.empty()) throw DataError("assemble_summary: no scored sentences");
  auto origin_weight = [&](const ScoredSentence& s) {
    if (weights == nullptr) return 0.0;
    auto it = weights->weights.find(s.origin_system);
    return it == weights->weights.end() ? 0.0 : it->second;
  };
  std::stable_sort(scored.begin(), scored.end(),
                   [&](const ScoredSentence& a, const ScoredSentence& b) {
                     if (a.score != b.score) return a.score > b.score;
                     double wa = origin_weight(a), wb = origin_weight(b);
                     if (wa != wb) return wa > wb;
                     if (a.origin_system != b.origin_system)
                       return a.origin_system < b.origin_system;
                     return a.origin_position < b.origin_position;
                   });

  CandidateSummary out;
  out.system_id = method_name;
  out.cluster_id = cluster_id;
  out.source = SummarySource::native;
  std::vector<TermVector> selected;
  int used = 0;
  for (const auto& ss : scored) {
    if (used + ss.sentence.word_count > config.budget_words) continue;
    TermVector v = build_term_vector(ss.sentence.clean_text);
    bool dup = false;
    for (const auto& sv : selected) {
      if (cosine(v, sv) > config.dedup_threshold) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    out.sentences.push_back(ss.sentence);
    selected.push_back(std::move(v));
    used += ss.sentence.word_count;
  }
  return out;
}

}  // namespace sumfuse

#endif  // SUMFUSE_AGGREGATION_HPP_

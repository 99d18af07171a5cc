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

#ifndef SUMFUSE_SIMILARITY_HPP_
#define SUMFUSE_SIMILARITY_HPP_

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sumfuse/textprep.hpp"

namespace sumfuse {

/// Which sentence/summary similarity to use. Parse accepts "cosine",
/// "ngram:N" and "kl".
struct SimilarityMeasure {
  enum class Kind { cosine, ngram_overlap, kl_based };
  Kind kind = Kind::cosine;
  int ngram_n = 1;            // for ngram_overlap
  double kl_epsilon = 0.001;  // additive smoothing for kl_based

  static SimilarityMeasure parse(std::string_view name) {
    SimilarityMeasure m;
    if (name == "cosine") {
      m.kind = Kind::cosine;
    } else if (name == "kl") {
      m.kind = Kind::kl_based;
    } else if (name.rfind("ngram:", 0) == 0) {
      m.kind = Kind::ngram_overlap;
      m.ngram_n = std::stoi(std::string(name.substr(6)));
      if (m.ngram_n < 1) throw std::invalid_argument("ngram order must be >= 1");
    } else {
      throw std::invalid_argument("unknown similarity measure: " +
                                  std::string(name));
    }
    return m;
  }
};

/// dot(u,v) / (|u||v|); 0 if either vector is empty.
inline double cosine(const TermVector& u, const TermVector& v) {
  if (u.norm() == 0.0 || v.norm() == 0.0) return 0.0;
  return TermVector::dot(u, v) / (u.norm() * v.norm());
}

/// Multiset Jaccard coefficient over the n-gram bags of the two token lists.
/// Returns 0 when either list has no n-grams.
inline double ngram_overlap(const std::vector<std::string>& a,
                            const std::vector<std::string>& b, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  auto bag = [n](const std::vector<std::string>& toks) {
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
  };
  auto ca = bag(a);
  auto cb = bag(b);
  if (ca.empty() || cb.empty()) return 0.0;
  long inter = 0, uni = 0;
  auto ia = ca.begin();
  auto ib = cb.begin();
  while (ia != ca.end() || ib != cb.end()) {
    if (ib == cb.end() || (ia != ca.end() && ia->first < ib->first)) {
      uni += ia->second;
      ++ia;
    } else if (ia == ca.end() || ib->first < ia->first) {
      uni += ib->second;
      ++ib;
    } else {
      inter += std::min(ia->second, ib->second);
      uni += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// 1 / (1 + KL(p || q)) after smoothing both vectors into distributions over
/// their union vocabulary with additive epsilon. Natural log. Asymmetric in
/// its arguments by construction.
inline double kl_similarity(const TermVector& p, const TermVector& q,
                            double epsilon = 0.001) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
  if (p.empty() && q.empty()) return 0.0;
  if (p.empty() || q.empty()) return 0.0;
  std::map<std::string, std::pair<double, double>> joint;
  for (const auto& [t, w] : p.weights()) joint[t].first = w;
  for (const auto& [t, w] : q.weights()) joint[t].second = w;
  double p_total = 0.0, q_total = 0.0;
  const double v = static_cast<double>(joint.size());
  for (const auto& [t, pq] : joint) {
    p_total += pq.first;
    q_total += pq.second;
  }
  p_total += epsilon * v;
  q_total += epsilon * v;
  double d = 0.0;
  for (const auto& [t, pq] : joint) {
    double pp = (pq.first + epsilon) / p_total;
    double qq = (pq.second + epsilon) / q_total;
    d += pp * std::log(pp / qq);
  }
  if (d < 0.0) d = 0.0;  // guard tiny negative rounding
  return 1.0 / (1.0 + d);
}

/// Precomputed representation of a piece of text, shared by all measures.
struct TextRep {
  TermVector vec;
  std::vector<std::string> tokens;  // post stopword/stem processing

  static TextRep build(std::string_view text, const VectorOptions& opts = {}) {
    TextRep r;
    r.tokens = content_tokens(tokenize(text), opts);
    TermVector::Map m;
    for (const auto& t : r.tokens) m[t] += 1.0;
    r.vec = TermVector(std::move(m));
    return r;
  }
};

inline double similarity(const TextRep& a, const TextRep& b,
                         const SimilarityMeasure& m) {
  switch (m.kind) {
    case SimilarityMeasure::Kind::cosine:
      return cosine(a.vec, b.vec);
    case SimilarityMeasure::Kind::ngram_overlap:
      return ngram_overlap(a.tokens, b.tokens, m.ngram_n);
    case SimilarityMeasure::Kind::kl_based:
      return kl_similarity(a.vec, b.vec, m.kl_epsilon);
  }
  return 0.0;
}

}  // namespace sumfuse

#endif  // SUMFUSE_SIMILARITY_HPP_

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

#ifndef SUMFUSE_TEXTPREP_HPP_
#define SUMFUSE_TEXTPREP_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sumfuse/porter.hpp"

namespace sumfuse {

// ---------------------------------------------------------------------------
// Tokenization
// ---------------------------------------------------------------------------

namespace detail {
inline bool is_alnum_ascii(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}
inline char to_lower_ascii(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}
}  // namespace detail

/// Lowercase alphanumeric tokens. A period is kept only when flanked by
/// alphanumerics on both sides, so "U.S." tokenizes to "u.s" while a
/// sentence-final period is dropped. All other punctuation separates tokens.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  const size_t n = text.size();
  for (size_t i = 0; i < n; ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (detail::is_alnum_ascii(c)) {
      cur.push_back(detail::to_lower_ascii(c));
    } else if (c == '.' && !cur.empty() && i + 1 < n &&
               detail::is_alnum_ascii(static_cast<unsigned char>(text[i + 1]))) {
      cur.push_back('.');
    } else {
      if (!cur.empty()) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// ---------------------------------------------------------------------------
// Stopwords
// ---------------------------------------------------------------------------

/// Fixed English stopword list (SMART-style function words), pinned for
/// reproducibility. Override via stopword-file flags where exposed.
inline const std::set<std::string, std::less<>>& default_stopwords() {
  static const std::set<std::string, std::less<>> kStopwords = {
      "a", "able", "about", "above", "according", "accordingly", "across",
      "actually", "after", "afterwards", "again", "against", "all", "allow",
      "allows", "almost", "alone", "along", "already", "also", "although",
      "always", "am", "among", "amongst", "an", "and", "another", "any",
      "anybody", "anyhow", "anyone", "anything", "anyway", "anyways",
      "anywhere", "apart", "appear", "appropriate", "are", "around", "as",
      "aside", "ask", "asking", "associated", "at", "available", "away",
      "awfully", "be", "became", "because", "become", "becomes", "becoming",
      "been", "before", "beforehand", "behind", "being", "believe", "below",
      "beside", "besides", "best", "better", "between", "beyond", "both",
      "brief", "but", "by", "came", "can", "cannot", "cant", "cause",
      "causes", "certain", "certainly", "changes", "clearly", "co", "com",
      "come", "comes", "concerning", "consequently", "consider",
      "considering", "contain", "containing", "contains", "corresponding",
      "could", "course", "currently", "definitely", "described", "despite",
      "did", "different", "do", "does", "doing", "done", "down", "downwards",
      "during", "each", "edu", "eg", "eight", "either", "else", "elsewhere",
      "enough", "entirely", "especially", "et", "etc", "even", "ever",
      "every", "everybody", "everyone", "everything", "everywhere", "ex",
      "exactly", "example", "except", "far", "few", "fifth", "first", "five",
      "followed", "following", "follows", "for", "former", "formerly",
      "forth", "four", "from", "further", "furthermore", "get", "gets",
      "getting", "given", "gives", "go", "goes", "going", "gone", "got",
      "gotten", "greetings", "had", "happens", "hardly", "has", "have",
      "having", "he", "hello", "help", "hence", "her", "here", "hereafter",
      "hereby", "herein", "hereupon", "hers", "herself", "hi", "him",
      "himself", "his", "hither", "hopefully", "how", "howbeit", "however",
      "i", "ie", "if", "ignored", "immediate", "in", "inasmuch", "inc",
      "indeed", "indicate", "indicated", "indicates", "inner", "insofar",
      "instead", "into", "inward", "is", "it", "its", "itself", "just",
      "keep", "keeps", "kept", "know", "known", "knows", "last", "lately",
      "later", "latter", "latterly", "least", "less", "lest", "let", "like",
      "liked", "likely", "little", "look", "looking", "looks", "ltd",
      "mainly", "many", "may", "maybe", "me", "mean", "meanwhile", "merely",
      "might", "more", "moreover", "most", "mostly", "much", "must", "my",
      "myself", "name", "namely", "nd", "near", "nearly", "necessary",
      "need", "needs", "neither", "never", "nevertheless", "new", "next",
      "nine", "no", "nobody", "non", "none", "noone", "nor", "normally",
      "not", "nothing", "novel", "now", "nowhere", "obviously", "of", "off",
      "often", "oh", "ok", "okay", "old", "on", "once", "one", "ones",
      "only", "onto", "or", "other", "others", "otherwise", "ought", "our",
      "ours", "ourselves", "out", "outside", "over", "overall", "own",
      "particular", "particularly", "per", "perhaps", "placed", "please",
      "plus", "possible", "presumably", "probably", "provides", "que",
      "quite", "qv", "rather", "rd", "re", "really", "reasonably",
      "regarding", "regardless", "regards", "relatively", "respectively",
      "right", "said", "same", "saw", "say", "saying", "says", "second",
      "secondly", "see", "seeing", "seem", "seemed", "seeming", "seems",
      "seen", "self", "selves", "sensible", "sent", "serious", "seriously",
      "seven", "several", "shall", "she", "should", "since", "six", "so",
      "some", "somebody", "somehow", "someone", "something", "sometime",
      "sometimes", "somewhat", "somewhere", "soon", "sorry", "specified",
      "specify", "specifying", "still", "sub", "such", "sup", "sure",
      "take", "taken", "tell", "tends", "th", "than", "thank", "thanks",
      "thanx", "that", "thats", "the", "their", "theirs", "them",
      "themselves", "then", "thence", "there", "thereafter", "thereby",
      "therefore", "therein", "theres", "thereupon", "these", "they",
      "think", "third", "this", "thorough", "thoroughly", "those", "though",
      "three", "through", "throughout", "thru", "thus", "to", "together",
      "too", "took", "toward", "towards", "tried", "tries", "truly", "try",
      "trying", "twice", "two", "un", "under", "unfortunately", "unless",
      "unlikely", "until", "unto", "up", "upon", "us", "use", "used",
      "useful", "uses", "using", "usually", "value", "various", "very",
      "via", "viz", "vs", "want", "wants", "was", "way", "we", "welcome",
      "well", "went", "were", "what", "whatever", "when", "whence",
      "whenever", "where", "whereafter", "whereas", "whereby", "wherein",
      "whereupon", "wherever", "whether", "which", "while", "whither",
      "who", "whoever", "whole", "whom", "whose", "why", "will", "willing",
      "wish", "with", "within", "without", "wonder", "would", "yes", "yet",
      "you", "your", "yours", "yourself", "yourselves", "zero"};
  return kStopwords;
}

inline bool is_stopword(std::string_view token) {
  const auto& sw = default_stopwords();
  return sw.find(token) != sw.end();
}

// ---------------------------------------------------------------------------
// Sentence splitting
// ---------------------------------------------------------------------------

/// Abbreviations whose trailing period does not end a sentence.
inline const std::set<std::string, std::less<>>& default_abbreviations() {
  static const std::set<std::string, std::less<>> kAbbrev = {
      "mr", "mrs", "ms", "dr", "prof", "rev", "gen", "sen", "rep", "gov",
      "st", "jr", "sr", "co", "corp", "inc", "ltd", "dept", "univ", "assn",
      "vs", "etc", "eg", "ie", "e.g", "i.e", "u.s", "u.k", "u.n", "a.m",
      "p.m", "no", "vol", "fig", "al", "approx", "est", "jan", "feb", "mar",
      "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec", "mon",
      "tue", "wed", "thu", "fri", "sat", "sun"};
  return kAbbrev;
}

namespace detail {

// Last word before position `end` (exclusive), lowercased, keeping internal
// periods so "U.S." yields "u.s".
inline std::string last_word_before(std::string_view text, size_t end) {
  size_t i = end;
  std::string w;
  while (i > 0) {
    unsigned char c = static_cast<unsigned char>(text[i - 1]);
    if (is_alnum_ascii(c) || c == '.') {
      w.push_back(to_lower_ascii(c));
      --i;
    } else {
      break;
    }
  }
  std::reverse(w.begin(), w.end());
  while (!w.empty() && w.front() == '.') w.erase(w.begin());
  return w;
}

}  // namespace detail

/// Rule-based sentence splitter: breaks after '.', '?', '!' followed by
/// whitespace or end-of-text, unless the period terminates a known
/// abbreviation or a single initial. Every non-whitespace byte of the input
/// appears in exactly one output sentence.
inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  size_t start = 0;
  const size_t n = text.size();

  auto flush = [&](size_t end) {
    // trim surrounding whitespace
    size_t a = start, b = end;
    while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
    if (b > a) out.emplace_back(text.substr(a, b - a));
    start = end;
  };

  for (size_t i = 0; i < n; ++i) {
    char c = text[i];
    if (c != '.' && c != '?' && c != '!') continue;
    // consume a run of terminal punctuation ("?!", "...")
    size_t j = i;
    while (j + 1 < n &&
           (text[j + 1] == '.' || text[j + 1] == '?' || text[j + 1] == '!' ||
            text[j + 1] == '"' || text[j + 1] == '\''))
      ++j;
    bool at_end = (j + 1 >= n);
    bool followed_by_space =
        !at_end && std::isspace(static_cast<unsigned char>(text[j + 1]));
    if (!at_end && !followed_by_space) continue;
    if (c == '.' && i == j) {
      std::string w = detail::last_word_before(text, i);
      if (!w.empty() && default_abbreviations().count(w)) continue;
    }
    flush(j + 1);
    i = j;
  }
  flush(n);
  return out;
}

// ---------------------------------------------------------------------------
// Term vectors
// ---------------------------------------------------------------------------

struct VectorOptions {
  enum class Weighting { tf, tf_idf };
  Weighting weighting = Weighting::tf;
  bool remove_stopwords = true;
  bool stem = true;
};

/// Sparse stem -> weight map with a cached Euclidean norm. Zero-weight
/// entries are never stored.
class TermVector {
 public:
  using Map = std::map<std::string, double>;

  TermVector() = default;
  explicit TermVector(Map weights) : weights_(std::move(weights)) {
    for (auto it = weights_.begin(); it != weights_.end();) {
      if (it->second <= 0.0)
        it = weights_.erase(it);
      else
        ++it;
    }
    recompute_norm();
  }

  const Map& weights() const { return weights_; }
  double norm() const { return norm_; }
  bool empty() const { return weights_.empty(); }
  size_t size() const { return weights_.size(); }

  double at(std::string_view term) const {
    auto it = weights_.find(std::string(term));
    return it == weights_.end() ? 0.0 : it->second;
  }

  static double dot(const TermVector& u, const TermVector& v) {
    const Map& a = u.weights_.size() <= v.weights_.size() ? u.weights_
                                                          : v.weights_;
    const Map& b = u.weights_.size() <= v.weights_.size() ? v.weights_
                                                          : u.weights_;
    double d = 0.0;
    for (const auto& [term, w] : a) {
      auto it = b.find(term);
      if (it != b.end()) d += w * it->second;
    }
    return d;
  }

  TermVector scaled(double c) const {
    Map m = weights_;
    for (auto& [k, v] : m) v *= c;
    return TermVector(std::move(m));
  }

 private:
  void recompute_norm() {
    double s = 0.0;
    for (const auto& [k, v] : weights_) s += v * v;
    norm_ = std::sqrt(s);
  }

  Map weights_;
  double norm_ = 0.0;
};

/// Apply stopword filtering and stemming per `opts` to raw tokens.
inline std::vector<std::string> content_tokens(
    const std::vector<std::string>& tokens, const VectorOptions& opts) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (opts.remove_stopwords && is_stopword(t)) continue;
    out.push_back(opts.stem ? porter_stem(t) : t);
  }
  return out;
}

/// Term-frequency (optionally idf-scaled) vector of a text.
inline TermVector build_term_vector(
    std::string_view text, const VectorOptions& opts = {},
    const std::map<std::string, double>* idf = nullptr) {
  TermVector::Map m;
  for (const auto& tok : content_tokens(tokenize(text), opts)) {
    m[tok] += 1.0;
  }
  if (opts.weighting == VectorOptions::Weighting::tf_idf) {
    if (idf == nullptr) {
      throw std::invalid_argument("tf-idf weighting requires an idf map");
    }
    for (auto& [term, w] : m) {
      auto it = idf->find(term);
      w *= (it == idf->end() ? 0.0 : it->second);
    }
  }
  return TermVector(std::move(m));
}

}  // namespace sumfuse

#endif  // SUMFUSE_TEXTPREP_HPP_

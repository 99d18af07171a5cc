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

#ifndef SUMFUSE_CORPUS_HPP_
#define SUMFUSE_CORPUS_HPP_

#include <algorithm>
#include <compare>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sumfuse/similarity.hpp"
#include "sumfuse/textprep.hpp"

namespace sumfuse {

struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SentenceId {
  int doc = 0;
  int sent = 0;
  auto operator<=>(const SentenceId&) const = default;
};

struct Sentence {
  SentenceId id;
  std::string raw_text;
  std::string clean_text;
  int word_count = 0;  // tokens in clean_text
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
};

struct ReferenceSummary {
  std::string author_id;
  std::string text;
};

struct DocumentCluster {
  std::string id;
  std::vector<Document> documents;
  std::vector<ReferenceSummary> references;

  std::vector<const Sentence*> all_sentences() const {
    std::vector<const Sentence*> out;
    for (const auto& d : documents)
      for (const auto& s : d.sentences) out.push_back(&s);
    return out;
  }

  const Sentence* find(SentenceId id) const {
    if (id.doc < 0 || id.doc >= static_cast<int>(documents.size()))
      return nullptr;
    for (const auto& s : documents[id.doc].sentences)
      if (s.id == id) return &s;
    return nullptr;
  }
};

enum class SummarySource { native, external_file };

struct CandidateSummary {
  std::string system_id;
  std::string cluster_id;
  std::vector<Sentence> sentences;  // in the candidate's ranking order
  SummarySource source = SummarySource::native;

  std::string concatenated_text() const {
    std::string out;
    for (const auto& s : sentences) {
      if (!out.empty()) out += ' ';
      out += s.clean_text;
    }
    return out;
  }
};

struct DuplicateReport {
  int exact_match_count = 0;
  int near_match_count = 0;
  double threshold = 0.0;
};

// ---------------------------------------------------------------------------
// Text cleaning
// ---------------------------------------------------------------------------

namespace detail {

// Replace invalid UTF-8 byte sequences with U+FFFD. Sets `had_invalid` when
// any replacement happened.
inline std::string sanitize_utf8(std::string_view in, bool* had_invalid) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(in.size());
  size_t i = 0;
  const size_t n = in.size();
  auto is_cont = [&](size_t k) {
    return k < n && (static_cast<unsigned char>(in[k]) & 0xC0) == 0x80;
  };
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(in[i]);
    size_t len;
    if (c < 0x80) {
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
    } else {
      len = 0;
    }
    bool ok = len > 0;
    for (size_t k = 1; ok && k < len; ++k) ok = is_cont(i + k);
    if (ok) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      out.append(kReplacement);
      if (had_invalid) *had_invalid = true;
      ++i;
    }
  }
  return out;
}

inline std::string lowercase_collapse(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char ch : in) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += to_lower_ascii(c);
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw LoadError("cannot open file: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool is_markup_line(std::string_view line) {
  size_t i = 0;
  while (i < line.size() &&
         std::isspace(static_cast<unsigned char>(line[i])))
    ++i;
  return i < line.size() && line[i] == '<';
}

}  // namespace detail

/// Normalized form used everywhere downstream: UTF-8 sanitized, lowercased
/// ASCII, whitespace collapsed.
inline std::string clean_text(std::string_view raw,
                              std::vector<std::string>* warnings = nullptr,
                              std::string_view context = {}) {
  bool had_invalid = false;
  std::string s = detail::sanitize_utf8(raw, &had_invalid);
  if (had_invalid && warnings) {
    warnings->push_back("invalid UTF-8 bytes replaced" +
                        (context.empty() ? std::string()
                                         : " in " + std::string(context)));
  }
  return detail::lowercase_collapse(s);
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::filesystem::path> sorted_files(
    const std::filesystem::path& dir, std::string_view ext = ".txt") {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir)) return files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext)
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) {
              return a.filename().string() < b.filename().string();
            });
  return files;
}

// Sentences of one document body: markup lines stripped, then rule-based
// splitting and cleaning; empty-after-cleaning sentences dropped.
inline std::vector<Sentence> extract_sentences(
    const std::string& body, int doc_index,
    std::vector<std::string>* warnings, std::string_view context) {
  std::string stripped;
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line)) {
    if (detail::is_markup_line(line)) continue;
    stripped += line;
    stripped += '\n';
  }
  std::vector<Sentence> out;
  int idx = 0;
  for (const auto& raw : split_sentences(stripped)) {
    Sentence s;
    s.raw_text = raw;
    s.clean_text = clean_text(raw, warnings, context);
    s.word_count = static_cast<int>(tokenize(s.clean_text).size());
    if (s.word_count < 1) continue;
    s.id = SentenceId{doc_index, idx++};
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

/// Load one cluster from `path` (layout: docs/*.txt, optional refs/*.txt).
/// Document order is lexicographic by filename; documents with no
/// extractable sentences are skipped with a warning.
inline DocumentCluster load_cluster(
    const std::filesystem::path& path,
    std::vector<std::string>* warnings = nullptr) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(path))
    throw LoadError("cluster directory not found: " + path.string());
  fs::path docs_dir = path / "docs";
  if (!fs::is_directory(docs_dir))
    throw LoadError("missing docs/ under " + path.string());

  DocumentCluster cluster;
  cluster.id = path.filename().string();
  if (cluster.id.empty()) cluster.id = path.parent_path().filename().string();

  for (const auto& f : detail::sorted_files(docs_dir)) {
    std::string body = detail::read_file(f);
    int doc_index = static_cast<int>(cluster.documents.size());
    auto sentences = detail::extract_sentences(body, doc_index, warnings,
                                               f.filename().string());
    if (sentences.empty()) {
      if (warnings)
        warnings->push_back("document with no extractable sentences skipped: " +
                            f.filename().string());
      continue;
    }
    Document d;
    d.id = f.stem().string();
    d.sentences = std::move(sentences);
    cluster.documents.push_back(std::move(d));
  }
  if (cluster.documents.empty())
    throw LoadError("cluster has no loadable documents: " + path.string());

  for (const auto& f : detail::sorted_files(path / "refs")) {
    ReferenceSummary r;
    r.author_id = f.stem().string();
    r.text = detail::read_file(f);
    cluster.references.push_back(std::move(r));
  }
  return cluster;
}

/// All clusters under a corpus root (one subdirectory per cluster), sorted
/// by cluster id.
inline std::vector<DocumentCluster> load_corpus(
    const std::filesystem::path& root,
    std::vector<std::string>* warnings = nullptr) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root))
    throw LoadError("corpus directory not found: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end(),
            [](const auto& a, const auto& b) {
              return a.filename().string() < b.filename().string();
            });
  std::vector<DocumentCluster> out;
  for (const auto& d : dirs) out.push_back(load_cluster(d, warnings));
  return out;
}

/// Parse a one-sentence-per-line summary file. Blank lines are skipped.
inline std::vector<Sentence> parse_summary_lines(
    const std::string& body, std::vector<std::string>* warnings = nullptr,
    std::string_view context = {}) {
  std::vector<Sentence> out;
  std::istringstream lines(body);
  std::string line;
  int idx = 0;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Sentence s;
    s.raw_text = line;
    s.clean_text = clean_text(line, warnings, context);
    s.word_count = static_cast<int>(tokenize(s.clean_text).size());
    if (s.word_count < 1) continue;
    s.id = SentenceId{0, idx++};
    out.push_back(std::move(s));
  }
  return out;
}

/// Candidate summaries for `cluster_id` under `dir` (layout:
/// <system-id>/<cluster-id>.txt). Systems without a usable file are omitted
/// with a warning.
inline std::vector<CandidateSummary> load_candidate_summaries(
    const std::filesystem::path& dir, const std::string& cluster_id,
    std::vector<std::string>* warnings = nullptr) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw LoadError("candidates directory not found: " + dir.string());
  std::vector<fs::path> systems;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) systems.push_back(e.path());
  std::sort(systems.begin(), systems.end(),
            [](const auto& a, const auto& b) {
              return a.filename().string() < b.filename().string();
            });

  std::vector<CandidateSummary> out;
  for (const auto& sysdir : systems) {
    fs::path f = sysdir / (cluster_id + ".txt");
    std::string system_id = sysdir.filename().string();
    if (!fs::is_regular_file(f)) {
      if (warnings)
        warnings->push_back("system " + system_id + " has no summary for " +
                            cluster_id);
      continue;
    }
    CandidateSummary cs;
    cs.system_id = system_id;
    cs.cluster_id = cluster_id;
    cs.source = SummarySource::external_file;
    cs.sentences =
        parse_summary_lines(detail::read_file(f), warnings, f.string());
    if (cs.sentences.empty()) {
      if (warnings)
        warnings->push_back("empty summary omitted: " + f.string());
      continue;
    }
    out.push_back(std::move(cs));
  }
  if (out.empty())
    throw LoadError("no candidate summaries found for cluster " + cluster_id);
  return out;
}

// ---------------------------------------------------------------------------
// Duplicate-content statistics
// ---------------------------------------------------------------------------

/// Counts sentences that have an exact clean-text match elsewhere in the
/// cluster, and sentences whose cosine similarity to some other sentence is
/// >= near_threshold. Near-match vectors keep stopwords so exact text
/// duplicates always reach cosine 1.
inline DuplicateReport duplicate_report(const DocumentCluster& cluster,
                                        double near_threshold) {
  if (!(near_threshold > 0.0 && near_threshold <= 1.0))
    throw DataError("near_threshold must be in (0, 1]");
  auto sentences = cluster.all_sentences();
  const size_t n = sentences.size();

  std::map<std::string, int> text_counts;
  for (const auto* s : sentences) ++text_counts[s->clean_text];

  VectorOptions opts;
  opts.remove_stopwords = false;
  opts.stem = true;
  std::vector<TermVector> vecs;
  vecs.reserve(n);
  for (const auto* s : sentences)
    vecs.push_back(build_term_vector(s->clean_text, opts));

  DuplicateReport rep;
  rep.threshold = near_threshold;
  for (size_t i = 0; i < n; ++i) {
    if (text_counts[sentences[i]->clean_text] > 1) ++rep.exact_match_count;
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (cosine(vecs[i], vecs[j]) >= near_threshold - 1e-12) {
        ++rep.near_match_count;
        break;
      }
    }
  }
  return rep;
}

/// Stable textual form of a cluster, used by the determinism checks and the
/// load manifest.
inline std::string serialize_cluster(const DocumentCluster& c) {
  std::ostringstream out;
  out << "cluster\t" << c.id << '\n';
  for (const auto& d : c.documents) {
    out << "doc\t" << d.id << '\n';
    for (const auto& s : d.sentences)
      out << s.id.doc << ':' << s.id.sent << '\t' << s.word_count << '\t'
          << s.clean_text << '\n';
  }
  for (const auto& r : c.references)
    out << "ref\t" << r.author_id << '\t' << clean_text(r.text) << '\n';
  return out.str();
}

}  // namespace sumfuse

#endif  // SUMFUSE_CORPUS_HPP_

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

#ifndef SUMFUSE_PIPELINE_HPP_
#define SUMFUSE_PIPELINE_HPP_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sumfuse/aggregation.hpp"
#include "sumfuse/calibration.hpp"
#include "sumfuse/candidates.hpp"
#include "sumfuse/corpus.hpp"
#include "sumfuse/rouge.hpp"

namespace sumfuse {

inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct PipelineConfig {
  std::string corpus_dir;
  std::string dev_corpus_dir;
  std::string candidates_dir;
  std::string output_dir;
  std::string background_counts;

  std::vector<std::string> stages = {"summarize", "calibrate", "aggregate",
                                     "evaluate"};
  std::vector<std::string> native_systems = {"lexrank", "freqsum", "tssum",
                                             "greedykl"};
  std::string method = "hybridrank";
  std::string measure = "cosine";
  double alpha = 0.3;
  double scaling_a = 0.1;
  double dedup_threshold = 0.5;
  int budget_words = 100;
  double damping = 0.85;
  double tol = 1e-6;
  int max_iter = 100;
  std::uint64_t seed = 1;
  int jobs = 1;
  RougeConfig rouge;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["corpus_dir"] = corpus_dir;
    j["dev_corpus_dir"] = dev_corpus_dir;
    j["candidates_dir"] = candidates_dir;
    j["output_dir"] = output_dir;
    j["background_counts"] = background_counts;
    j["stages"] = stages;
    j["native_systems"] = native_systems;
    j["method"] = method;
    j["measure"] = measure;
    j["alpha"] = alpha;
    j["scaling_a"] = scaling_a;
    j["dedup_threshold"] = dedup_threshold;
    j["budget_words"] = budget_words;
    j["damping"] = damping;
    j["tol"] = tol;
    j["max_iter"] = max_iter;
    j["seed"] = seed;
    j["jobs"] = jobs;
    j["rouge"] = {{"n_values", rouge.n_values},
                  {"stemming", rouge.stemming},
                  {"keep_stopwords", rouge.keep_stopwords},
                  {"truncate_words", rouge.truncate_words},
                  {"multi_ref", rouge.multi_ref == RougeConfig::MultiRef::average
                                    ? "average"
                                    : "best"},
                  {"bootstrap_resamples", rouge.bootstrap_resamples},
                  {"confidence", rouge.confidence}};
    return j;
  }

  static PipelineConfig from_json(const nlohmann::json& j) {
    PipelineConfig c;
    c.corpus_dir = j.value("corpus_dir", c.corpus_dir);
    c.dev_corpus_dir = j.value("dev_corpus_dir", c.dev_corpus_dir);
    c.candidates_dir = j.value("candidates_dir", c.candidates_dir);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.background_counts = j.value("background_counts", c.background_counts);
    c.stages = j.value("stages", c.stages);
    c.native_systems = j.value("native_systems", c.native_systems);
    c.method = j.value("method", c.method);
    c.measure = j.value("measure", c.measure);
    c.alpha = j.value("alpha", c.alpha);
    c.scaling_a = j.value("scaling_a", c.scaling_a);
    c.dedup_threshold = j.value("dedup_threshold", c.dedup_threshold);
    c.budget_words = j.value("budget_words", c.budget_words);
    c.damping = j.value("damping", c.damping);
    c.tol = j.value("tol", c.tol);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("rouge")) {
      const auto& r = j.at("rouge");
      c.rouge.n_values = r.value("n_values", c.rouge.n_values);
      c.rouge.stemming = r.value("stemming", c.rouge.stemming);
      c.rouge.keep_stopwords =
          r.value("keep_stopwords", c.rouge.keep_stopwords);
      c.rouge.truncate_words =
          r.value("truncate_words", c.rouge.truncate_words);
      c.rouge.multi_ref = r.value("multi_ref", "average") == std::string("best")
                              ? RougeConfig::MultiRef::best
                              : RougeConfig::MultiRef::average;
      c.rouge.bootstrap_resamples =
          r.value("bootstrap_resamples", c.rouge.bootstrap_resamples);
      c.rouge.confidence = r.value("confidence", c.rouge.confidence);
    }
    return c;
  }

  AggregationConfig aggregation() const {
    AggregationConfig a;
    a.alpha = alpha;
    a.measure = SimilarityMeasure::parse(measure);
    a.dedup_threshold = dedup_threshold;
    a.budget_words = budget_words;
    a.damping = damping;
    a.tol = tol;
    a.max_iter = max_iter;
    return a;
  }
};

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> kMethods = {
      "sentrank", "globalrank", "localrank", "hybridrank",
      "borda",    "rr",         "roundrobin"};
  return kMethods;
}

inline bool is_known_method(const std::string& m) {
  const auto& ms = known_methods();
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

// ---------------------------------------------------------------------------
// Hashing and manifests
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Order-independent-free hash of every regular file under `root`
/// (filenames and contents, walked in sorted order).
inline std::string hash_tree(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::exists(root)) return "absent";
  std::vector<fs::path> files;
  if (fs::is_regular_file(root)) {
    files.push_back(root);
  } else {
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
  }
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& f : files) {
    h = fnv1a64(fs::relative(f, root).generic_string(), h);
    h = fnv1a64(detail::read_file(f), h);
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

/// Reproducibility record written beside every artifact-producing run.
/// Contains no wall-clock fields, so identical runs produce identical
/// manifests.
inline nlohmann::json make_manifest(const PipelineConfig& config,
                                    const std::string& command_line) {
  nlohmann::json m;
  m["tool_version"] = kToolVersion;
  m["command_line"] = command_line;
  m["config"] = config.to_json();
  m["seed"] = config.seed;
  nlohmann::json hashes;
  hashes["corpus"] = hash_tree(config.corpus_dir);
  hashes["dev_corpus"] = hash_tree(config.dev_corpus_dir);
  hashes["candidates"] = hash_tree(config.candidates_dir);
  hashes["background_counts"] = hash_tree(config.background_counts);
  m["input_hashes"] = hashes;
  return m;
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& body) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write: " + path.string());
  out << body;
}

inline void write_summary_file(const std::filesystem::path& dir,
                               const CandidateSummary& summary) {
  std::string body;
  for (const auto& s : summary.sentences) {
    body += s.raw_text;
    body += '\n';
  }
  write_text_file(dir / summary.system_id / (summary.cluster_id + ".txt"),
                  body);
}

/// Map fn over items with up to `jobs` concurrent tasks; results keep input
/// order, so output is independent of the job count.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, int jobs, Fn fn)
    -> std::vector<decltype(fn(items.front()))> {
  using R = decltype(fn(items.front()));
  std::vector<R> results(items.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < items.size(); ++i) results[i] = fn(items[i]);
    return results;
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= items.size()) break;
      results[i] = fn(items[i]);
    }
  };
  std::vector<std::future<void>> futures;
  for (int t = 0; t < jobs; ++t)
    futures.push_back(std::async(std::launch::async, worker));
  for (auto& f : futures) f.get();
  return results;
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

/// Run one native summarizer over a cluster.
inline SentenceRanking native_ranking(
    const DocumentCluster& cluster, const std::string& system,
    const PipelineConfig& config,
    const std::map<std::string, double>* background = nullptr) {
  if (system == "lexrank") {
    LexRankParams p;
    p.damping = config.damping;
    p.tol = config.tol;
    p.max_iter = config.max_iter;
    return lexrank(cluster, p);
  }
  if (system == "freqsum") return freqsum(cluster);
  if (system == "greedykl") return greedy_kl(cluster, config.budget_words);
  if (system == "tssum") {
    if (background == nullptr || background->empty())
      throw DataError("tssum requires --background counts");
    return tssum(cluster, *background);
  }
  throw DataError("unknown native system: " + system +
                  " (expected lexrank|freqsum|tssum|greedykl)");
}

/// Generate native candidate summaries into `candidates_dir`.
inline void run_summarize(const std::vector<DocumentCluster>& clusters,
                          const PipelineConfig& config,
                          std::vector<std::string>* warnings = nullptr) {
  std::map<std::string, double> background;
  for (const auto& sys : config.native_systems) {
    if (sys == "tssum") {
      background = load_background_counts(config.background_counts);
      break;
    }
  }
  auto summaries = parallel_map(
      clusters, config.jobs, [&](const DocumentCluster& cluster) {
        std::vector<CandidateSummary> out;
        for (const auto& sys : config.native_systems) {
          auto ranking = native_ranking(cluster, sys, config, &background);
          out.push_back(rank_to_summary(ranking, cluster, config.budget_words,
                                        config.dedup_threshold));
        }
        return out;
      });
  for (const auto& per_cluster : summaries)
    for (const auto& s : per_cluster)
      write_summary_file(config.candidates_dir, s);
  (void)warnings;
}

/// Aggregate one cluster with the configured method. Returns the fused
/// summary plus a JSON diagnostic (system weights and per-sentence scores).
inline std::pair<CandidateSummary, nlohmann::json> aggregate_cluster(
    const DocumentCluster& cluster,
    const std::vector<CandidateSummary>& candidates,
    const std::string& method, const AggregationConfig& agg,
    const CalibrationProfile* profile,
    std::vector<std::string>* warnings = nullptr) {
  nlohmann::json diag;
  diag["cluster_id"] = cluster.id;
  diag["method"] = method;

  CandidateSummary fused;
  if (method == "borda" || method == "rr" || method == "roundrobin") {
    std::vector<SentenceRanking> rankings;
    std::set<SentenceId> universe;
    for (const auto* s : cluster.all_sentences()) universe.insert(s->id);
    for (const auto& c : candidates)
      rankings.push_back(candidate_to_ranking(cluster, c, warnings));
    SentenceRanking agg_ranking =
        method == "borda"
            ? borda(rankings, &universe)
            : (method == "rr" ? reciprocal_rank(rankings, &universe)
                              : round_robin(rankings));
    fused = rank_to_summary(agg_ranking, cluster, agg.budget_words,
                            agg.dedup_threshold);
    fused.system_id = method;
    fused.cluster_id = cluster.id;
  } else {
    std::vector<ScoredSentence> scored;
    SystemWeights used_weights;
    if (method == "sentrank") {
      used_weights = SystemWeights::uniform_for(candidates);
      scored = sent_rank_scores(candidates, agg.measure);
    } else {
      std::vector<std::string> systems;
      for (const auto& c : candidates) systems.push_back(c.system_id);
      if (method == "localrank") {
        used_weights = local_rank_weights(candidates, agg.measure, agg.damping,
                                          agg.tol, agg.max_iter, warnings);
      } else if (method == "globalrank" || method == "hybridrank") {
        if (profile == nullptr)
          throw DataError(method + " requires a calibration profile");
        SystemWeights global_w = global_weights_lookup(*profile, systems);
        if (method == "globalrank") {
          used_weights = global_w;
        } else {
          SystemWeights local_w =
              local_rank_weights(candidates, agg.measure, agg.damping,
                                 agg.tol, agg.max_iter, warnings);
          used_weights = hybrid_weights(local_w, global_w, agg.alpha);
          diag["local_weights"] = local_w.weights;
          diag["global_weights"] = global_w.weights;
        }
      } else {
        throw DataError("unknown aggregation method: " + method);
      }
      scored = weighted_sentence_scores(candidates, used_weights, agg.measure);
    }
    diag["weights"] = used_weights.weights;
    nlohmann::json sentences = nlohmann::json::array();
    for (const auto& ss : scored) {
      sentences.push_back({{"system", ss.origin_system},
                           {"position", ss.origin_position},
                           {"score", ss.score},
                           {"text", ss.sentence.clean_text}});
    }
    diag["sentences"] = sentences;
    fused = assemble_summary(std::move(scored), agg, method, &used_weights,
                             cluster.id);
  }
  nlohmann::json chosen = nlohmann::json::array();
  for (const auto& s : fused.sentences) chosen.push_back(s.clean_text);
  diag["summary"] = chosen;
  return {std::move(fused), std::move(diag)};
}

/// Aggregate every cluster and write fused summaries plus diagnostics under
/// output_dir.
inline void run_aggregate(const std::vector<DocumentCluster>& clusters,
                          const PipelineConfig& config,
                          const CalibrationProfile* profile,
                          std::vector<std::string>* warnings = nullptr) {
  if (!is_known_method(config.method)) {
    std::string msg = "unknown method '" + config.method + "'; expected one of";
    for (const auto& m : known_methods()) msg += " " + m;
    throw DataError(msg);
  }
  AggregationConfig agg = config.aggregation();
  auto results = parallel_map(
      clusters, config.jobs, [&](const DocumentCluster& cluster) {
        std::vector<std::string> local_warnings;
        auto candidates = load_candidate_summaries(
            config.candidates_dir, cluster.id, &local_warnings);
        auto r = aggregate_cluster(cluster, candidates, config.method, agg,
                                   profile, &local_warnings);
        return std::make_tuple(std::move(r.first), std::move(r.second),
                               std::move(local_warnings));
      });
  std::filesystem::path out(config.output_dir);
  for (auto& [fused, diag, local_warnings] : results) {
    write_summary_file(out / "fused", fused);
    write_text_file(out / "diagnostics" /
                        (fused.cluster_id + "." + config.method + ".json"),
                    diag.dump(2) + "\n");
    if (warnings)
      warnings->insert(warnings->end(), local_warnings.begin(),
                       local_warnings.end());
  }
}

// ---------------------------------------------------------------------------
// Evaluation output
// ---------------------------------------------------------------------------

inline std::string score_table_tsv(const std::vector<ScoreRow>& rows) {
  std::ostringstream out;
  out << "system\tn\trecall\tci_low\tci_high\tclusters_covered\n";
  out.setf(std::ios::fixed);
  out.precision(6);
  for (const auto& r : rows)
    out << r.system_id << '\t' << r.n << '\t' << r.recall << '\t' << r.ci_low
        << '\t' << r.ci_high << '\t' << r.clusters_covered << '\n';
  return out.str();
}

inline nlohmann::json score_table_json(const std::vector<ScoreRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"system", r.system_id},
                 {"n", r.n},
                 {"recall", r.recall},
                 {"ci_low", r.ci_low},
                 {"ci_high", r.ci_high},
                 {"clusters_covered", r.clusters_covered}});
  return j;
}

/// Collect per-cluster summary texts for every system directory under
/// `summaries_root` (layout <system>/<cluster>.txt).
inline std::map<std::string, std::map<std::string, std::string>>
collect_summary_texts(const std::filesystem::path& summaries_root,
                      const std::vector<DocumentCluster>& clusters) {
  namespace fs = std::filesystem;
  std::map<std::string, std::map<std::string, std::string>> out;
  if (!fs::is_directory(summaries_root)) return out;
  for (const auto& e : fs::directory_iterator(summaries_root)) {
    if (!e.is_directory()) continue;
    std::string system_id = e.path().filename().string();
    for (const auto& cluster : clusters) {
      fs::path f = e.path() / (cluster.id + ".txt");
      if (fs::is_regular_file(f))
        out[system_id][cluster.id] = detail::read_file(f);
    }
  }
  return out;
}

/// Evaluate candidate systems plus any fused summaries and write
/// scores.tsv / scores.json under output_dir.
inline CorpusEvaluation run_evaluate(
    const std::vector<DocumentCluster>& clusters,
    const PipelineConfig& config,
    std::vector<std::string>* warnings = nullptr) {
  auto summaries = collect_summary_texts(config.candidates_dir, clusters);
  auto fused = collect_summary_texts(
      std::filesystem::path(config.output_dir) / "fused", clusters);
  for (auto& [sys, per_cluster] : fused)
    summaries[sys] = std::move(per_cluster);
  if (summaries.empty() && warnings)
    warnings->push_back("no summaries found to evaluate");
  auto ev = evaluate_corpus(clusters, summaries, config.rouge, config.seed,
                            warnings);
  std::filesystem::path out(config.output_dir);
  write_text_file(out / "scores.tsv", score_table_tsv(ev.table));
  write_text_file(out / "scores.json", score_table_json(ev.table).dump(2) + "\n");
  return ev;
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

/// Execute the configured stage list and write a run manifest beside the
/// outputs. Throws on any stage failure; the manifest written on failure
/// marks the run partial.
inline void run_pipeline(const PipelineConfig& config,
                         const std::string& command_line = "pipeline",
                         std::vector<std::string>* warnings = nullptr) {
  namespace fs = std::filesystem;
  if (config.output_dir.empty()) throw DataError("output_dir is required");
  fs::create_directories(config.output_dir);

  nlohmann::json manifest = make_manifest(config, command_line);
  auto write_manifest = [&](bool complete) {
    manifest["complete"] = complete;
    write_text_file(fs::path(config.output_dir) / "manifest.json",
                    manifest.dump(2) + "\n");
  };

  try {
    std::vector<DocumentCluster> clusters = load_corpus(config.corpus_dir,
                                                        warnings);
    CalibrationProfile profile;
    bool have_profile = false;
    for (const auto& stage : config.stages) {
      if (stage == "summarize") {
        run_summarize(clusters, config, warnings);
      } else if (stage == "calibrate") {
        auto dev = config.dev_corpus_dir.empty()
                       ? clusters
                       : load_corpus(config.dev_corpus_dir, warnings);
        profile = calibrate(dev, config.candidates_dir, config.rouge,
                            config.scaling_a, warnings);
        profile.dev_corpus_id = config.dev_corpus_dir.empty()
                                    ? config.corpus_dir
                                    : config.dev_corpus_dir;
        profile.save(fs::path(config.output_dir) / "profile.json");
        have_profile = true;
      } else if (stage == "aggregate") {
        fs::path p = fs::path(config.output_dir) / "profile.json";
        if (!have_profile && fs::exists(p)) {
          profile = CalibrationProfile::load(p);
          have_profile = true;
        }
        run_aggregate(clusters, config, have_profile ? &profile : nullptr,
                      warnings);
      } else if (stage == "evaluate") {
        run_evaluate(clusters, config, warnings);
      } else {
        throw DataError("unknown pipeline stage: " + stage);
      }
    }
  } catch (...) {
    write_manifest(false);
    throw;
  }
  // manifest input hashes cover pre-run inputs; outputs are a function of
  // manifest contents
  write_manifest(true);
}

}  // namespace sumfuse

#endif  // SUMFUSE_PIPELINE_HPP_

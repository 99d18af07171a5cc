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

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sumfuse/pipeline.hpp"
#include "sumfuse/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_run_manifest(const sumfuse::PipelineConfig& config,
                        const std::string& command_line) {
  if (config.output_dir.empty()) return;
  auto manifest = sumfuse::make_manifest(config, command_line);
  manifest["complete"] = true;
  sumfuse::write_text_file(
      std::filesystem::path(config.output_dir) / "manifest.json",
      manifest.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sumfuse;

  CLI::App app{"Consensus-based fusion of extractive summarization systems"};
  app.require_subcommand(1);

  PipelineConfig config;
  std::string command_line = join_args(argc, argv);

  // shared options installed per subcommand as needed
  auto add_corpus = [&](CLI::App* sub) {
    sub->add_option("--corpus", config.corpus_dir, "corpus root directory")
        ->required();
  };
  auto add_candidates = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--candidates", config.candidates_dir,
                              "candidate summaries directory");
    if (required) o->required();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", config.output_dir, "output directory")
        ->required();
  };

  // --- summarize ---
  auto* sum = app.add_subcommand(
      "summarize", "run a native summarizer and write candidate files");
  std::string system;
  add_corpus(sum);
  sum->add_option("--system", system, "lexrank|freqsum|tssum|greedykl")
      ->required();
  sum->add_option("--budget-words", config.budget_words, "word budget");
  sum->add_option("--dedup", config.dedup_threshold,
                  "cosine dedup threshold");
  sum->add_option("--background", config.background_counts,
                  "background stem-count file (tssum)");
  sum->add_option("--out", config.candidates_dir,
                  "candidates output directory")
      ->required();
  sum->add_option("--jobs", config.jobs, "parallel cluster jobs");

  // --- calibrate ---
  auto* cal = app.add_subcommand(
      "calibrate", "compute global weights from a development corpus");
  std::string profile_path;
  add_corpus(cal);
  cal->add_option("--candidates", config.candidates_dir,
                  "dev candidate summaries")
      ->required();
  cal->add_option("--a", config.scaling_a, "scaling factor a");
  cal->add_option("--profile", profile_path, "profile output path")
      ->required();

  // --- aggregate ---
  auto* agg = app.add_subcommand("aggregate",
                                 "fuse candidate summaries into one summary");
  std::string calibration_path;
  add_corpus(agg);
  add_candidates(agg, true);
  add_out(agg);
  agg->add_option("--method", config.method,
                  "sentrank|globalrank|localrank|hybridrank|borda|rr|"
                  "roundrobin");
  agg->add_option("--alpha", config.alpha, "hybrid mixing weight");
  agg->add_option("--measure", config.measure, "cosine|ngram:N|kl");
  agg->add_option("--dedup", config.dedup_threshold, "dedup threshold");
  agg->add_option("--budget-words", config.budget_words, "word budget");
  agg->add_option("--calibration", calibration_path,
                  "calibration profile (globalrank/hybridrank)");
  agg->add_option("--jobs", config.jobs, "parallel cluster jobs");

  // --- evaluate ---
  auto* eva = app.add_subcommand("evaluate", "score summaries with ROUGE-N");
  add_corpus(eva);
  add_candidates(eva, true);
  add_out(eva);
  eva->add_option("--truncate", config.rouge.truncate_words,
                  "peer truncation in words");
  eva->add_option("--resamples", config.rouge.bootstrap_resamples,
                  "bootstrap resamples");
  eva->add_option("--confidence", config.rouge.confidence,
                  "bootstrap confidence level");
  eva->add_option("--seed", config.seed, "bootstrap seed");

  // --- compare ---
  auto* cmp = app.add_subcommand(
      "compare", "two-sided sign test between two systems");
  std::string system_a, system_b;
  int compare_n = 1;
  add_corpus(cmp);
  add_candidates(cmp, true);
  cmp->add_option("--system-a", system_a, "first system id")->required();
  cmp->add_option("--system-b", system_b, "second system id")->required();
  cmp->add_option("--n", compare_n, "ROUGE n-gram order");

  // --- report ---
  auto* rep = app.add_subcommand("report",
                                 "merge score tables into one comparison");
  std::vector<std::string> table_paths;
  std::string signtest_path;
  rep->add_option("--tables", table_paths, "scores.json files")
      ->required()
      ->expected(-1);
  rep->add_option("--signtest", signtest_path,
                  "JSON array of {system, n, p_value}");

  // --- pipeline ---
  auto* pipe = app.add_subcommand("pipeline",
                                  "run configured stages end to end");
  std::string config_path;
  pipe->add_option("config", config_path, "pipeline config (JSON)")
      ->required();
  pipe->add_option("--jobs", config.jobs, "override parallel jobs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  std::vector<std::string> warnings;
  try {
    if (sum->parsed()) {
      config.native_systems = {system};
      auto clusters = load_corpus(config.corpus_dir, &warnings);
      run_summarize(clusters, config, &warnings);
      print_warnings(warnings);
      return kExitOk;
    }
    if (cal->parsed()) {
      auto clusters = load_corpus(config.corpus_dir, &warnings);
      auto profile = calibrate(clusters, config.candidates_dir, config.rouge,
                               config.scaling_a, &warnings, utc_now());
      profile.dev_corpus_id = config.corpus_dir;
      profile.save(profile_path);
      print_warnings(warnings);
      std::cout << "profile written to " << profile_path << '\n';
      return kExitOk;
    }
    if (agg->parsed()) {
      if (!is_known_method(config.method)) {
        std::cerr << "unknown method '" << config.method
                  << "'; valid methods:";
        for (const auto& m : known_methods()) std::cerr << ' ' << m;
        std::cerr << '\n';
        return kExitUsage;
      }
      auto clusters = load_corpus(config.corpus_dir, &warnings);
      CalibrationProfile profile;
      bool have_profile = false;
      if (!calibration_path.empty()) {
        profile = CalibrationProfile::load(calibration_path);
        have_profile = true;
      }
      run_aggregate(clusters, config, have_profile ? &profile : nullptr,
                    &warnings);
      write_run_manifest(config, command_line);
      print_warnings(warnings);
      return kExitOk;
    }
    if (eva->parsed()) {
      auto clusters = load_corpus(config.corpus_dir, &warnings);
      auto ev = run_evaluate(clusters, config, &warnings);
      write_run_manifest(config, command_line);
      print_warnings(warnings);
      std::cout << score_table_tsv(ev.table);
      return kExitOk;
    }
    if (cmp->parsed()) {
      auto clusters = load_corpus(config.corpus_dir, &warnings);
      auto summaries = collect_summary_texts(config.candidates_dir, clusters);
      for (const auto& sys : {system_a, system_b}) {
        if (!summaries.count(sys))
          throw DataError("no summaries found for system " + sys);
      }
      std::vector<double> a, b;
      for (const auto& cluster : clusters) {
        const auto& sa = summaries[system_a];
        const auto& sb = summaries[system_b];
        auto ia = sa.find(cluster.id);
        auto ib = sb.find(cluster.id);
        if (ia == sa.end() || ib == sb.end()) {
          warnings.push_back("cluster " + cluster.id +
                             " skipped (missing summary)");
          continue;
        }
        std::vector<std::string> refs;
        for (const auto& r : cluster.references) refs.push_back(r.text);
        a.push_back(
            rouge_n(ia->second, refs, compare_n, config.rouge).recall);
        b.push_back(
            rouge_n(ib->second, refs, compare_n, config.rouge).recall);
      }
      auto r = sign_test(a, b);
      print_warnings(warnings);
      std::cout << "systems\t" << system_a << " vs " << system_b << "\n"
                << "n\t" << compare_n << "\n"
                << "wins_a\t" << r.wins_a << "\n"
                << "wins_b\t" << r.wins_b << "\n"
                << "ties\t" << r.ties << "\n"
                << "p_value\t" << r.p_value << "\n";
      return kExitOk;
    }
    if (rep->parsed()) {
      std::vector<LabeledScoreTable> tables;
      for (const auto& p : table_paths) {
        std::ifstream in(p);
        if (!in) throw LoadError("cannot read score table: " + p);
        nlohmann::json j;
        in >> j;
        tables.push_back({p, parse_score_table_json(j)});
      }
      std::map<std::pair<std::string, int>, double> p_values;
      if (!signtest_path.empty()) {
        std::ifstream in(signtest_path);
        if (!in) throw LoadError("cannot read sign-test file: " +
                                 signtest_path);
        nlohmann::json j;
        in >> j;
        for (const auto& e : j)
          p_values[{e.at("system").get<std::string>(), e.at("n").get<int>()}] =
              e.at("p_value").get<double>();
      }
      std::cout << render_report(tables, p_values);
      return kExitOk;
    }
    if (pipe->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw LoadError("cannot read config: " + config_path);
      nlohmann::json j;
      in >> j;
      PipelineConfig file_config = PipelineConfig::from_json(j);
      if (pipe->count("--jobs")) file_config.jobs = config.jobs;
      if (!is_known_method(file_config.method)) {
        std::cerr << "unknown method '" << file_config.method
                  << "'; valid methods:";
        for (const auto& m : known_methods()) std::cerr << ' ' << m;
        std::cerr << '\n';
        return kExitUsage;
      }
      run_pipeline(file_config, command_line, &warnings);
      print_warnings(warnings);
      return kExitOk;
    }
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

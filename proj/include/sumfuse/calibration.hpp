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

#ifndef SUMFUSE_CALIBRATION_HPP_
#define SUMFUSE_CALIBRATION_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sumfuse/aggregation.hpp"
#include "sumfuse/corpus.hpp"
#include "sumfuse/rouge.hpp"

namespace sumfuse {

/// Development-set reputation profile: per-system mean ROUGE-1 recall and
/// the derived global weights. min over g_values is exactly 0 by
/// construction.
struct CalibrationProfile {
  static constexpr const char* kSchema = "sumfuse-calibration-v1";

  std::string dev_corpus_id;
  std::map<std::string, double> rouge1_recall;
  double scaling_a = 0.1;
  std::map<std::string, double> g_values;
  std::string created_at;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema"] = kSchema;
    j["dev_corpus_id"] = dev_corpus_id;
    j["rouge1_recall"] = rouge1_recall;
    j["scaling_a"] = scaling_a;
    j["g_values"] = g_values;
    j["created_at"] = created_at;
    return j;
  }

  static CalibrationProfile from_json(const nlohmann::json& j) {
    if (j.value("schema", "") != kSchema)
      throw DataError("unrecognized calibration profile schema");
    CalibrationProfile p;
    p.dev_corpus_id = j.value("dev_corpus_id", "");
    p.rouge1_recall =
        j.at("rouge1_recall").get<std::map<std::string, double>>();
    p.scaling_a = j.at("scaling_a").get<double>();
    p.g_values = j.at("g_values").get<std::map<std::string, double>>();
    p.created_at = j.value("created_at", "");
    return p;
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw LoadError("cannot write profile: " + path.string());
    out << to_json().dump(2) << '\n';
  }

  static CalibrationProfile load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot read profile: " + path.string());
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }
};

/// G(k) = a * (R1_k / sigma - min over systems of R1_k / sigma), with sigma
/// the sample standard deviation of the recalls.
inline std::map<std::string, double> compute_global_weights(
    const std::map<std::string, double>& rouge1, double a) {
  if (rouge1.size() < 2)
    throw DataError("compute_global_weights needs >= 2 systems");
  if (!(a > 0.0)) throw DataError("scaling factor a must be > 0");
  double mean = 0.0;
  for (const auto& [k, r] : rouge1) {
    if (r < 0.0) throw DataError("negative recall for system " + k);
    mean += r;
  }
  mean /= static_cast<double>(rouge1.size());
  double var = 0.0;
  for (const auto& [k, r] : rouge1) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rouge1.size() - 1);
  double sigma = std::sqrt(var);
  if (sigma <= 0.0)
    throw DataError(
        "all recalls identical (sigma = 0); use uniform weights instead");
  double min_scaled = std::numeric_limits<double>::infinity();
  for (const auto& [k, r] : rouge1) min_scaled = std::min(min_scaled, r / sigma);
  std::map<std::string, double> g;
  for (const auto& [k, r] : rouge1) g[k] = a * (r / sigma - min_scaled);
  return g;
}

/// Verbatim lookup of stored global weights for the requested systems.
inline SystemWeights global_weights_lookup(
    const CalibrationProfile& profile,
    const std::vector<std::string>& systems) {
  SystemWeights w;
  w.kind = SystemWeights::Kind::global;
  std::vector<std::string> missing;
  for (const auto& s : systems) {
    auto it = profile.g_values.find(s);
    if (it == profile.g_values.end())
      missing.push_back(s);
    else
      w.weights[s] = it->second;
  }
  if (!missing.empty()) {
    std::string msg = "calibration profile missing systems:";
    for (const auto& m : missing) msg += " " + m;
    throw DataError(msg);
  }
  return w;
}

/// Full dev-set calibration: mean per-cluster ROUGE-1 recall per system,
/// then global weights. Systems lacking a summary for any dev cluster are
/// excluded with a warning.
inline CalibrationProfile calibrate(
    const std::vector<DocumentCluster>& dev_clusters,
    const std::filesystem::path& candidates_dir, const RougeConfig& rouge_cfg,
    double a, std::vector<std::string>* warnings = nullptr,
    std::string created_at = {}) {
  if (dev_clusters.empty()) throw DataError("calibrate: empty dev corpus");

  // system -> cluster -> recall
  std::map<std::string, std::map<std::string, double>> recalls;
  for (const auto& cluster : dev_clusters) {
    if (cluster.references.empty())
      throw DataError("dev cluster has no references: " + cluster.id);
    std::vector<std::string> refs;
    for (const auto& r : cluster.references) refs.push_back(r.text);
    auto candidates =
        load_candidate_summaries(candidates_dir, cluster.id, warnings);
    for (const auto& c : candidates) {
      std::string peer;
      for (const auto& s : c.sentences) {
        if (!peer.empty()) peer += ' ';
        peer += s.raw_text;
      }
      recalls[c.system_id][cluster.id] =
          rouge_n(peer, refs, 1, rouge_cfg, warnings).recall;
    }
  }

  CalibrationProfile profile;
  profile.scaling_a = a;
  profile.created_at = std::move(created_at);
  for (const auto& [system_id, per_cluster] : recalls) {
    if (per_cluster.size() != dev_clusters.size()) {
      if (warnings)
        warnings->push_back("system " + system_id +
                            " excluded from calibration (missing clusters)");
      continue;
    }
    double sum = 0.0;
    for (const auto& [cid, r] : per_cluster) sum += r;
    profile.rouge1_recall[system_id] =
        sum / static_cast<double>(per_cluster.size());
  }
  profile.g_values = compute_global_weights(profile.rouge1_recall, a);
  return profile;
}

}  // namespace sumfuse

#endif  // SUMFUSE_CALIBRATION_HPP_

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

#ifndef SUMFUSE_REPORT_HPP_
#define SUMFUSE_REPORT_HPP_

#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sumfuse/rouge.hpp"

namespace sumfuse {

/// One input table with a provenance label (typically the source file).
struct LabeledScoreTable {
  std::string label;
  std::vector<ScoreRow> rows;
};

inline std::vector<ScoreRow> parse_score_table_json(const nlohmann::json& j) {
  std::vector<ScoreRow> rows;
  for (const auto& e : j) {
    ScoreRow r;
    r.system_id = e.at("system").get<std::string>();
    r.n = e.at("n").get<int>();
    r.recall = e.at("recall").get<double>();
    r.ci_low = e.value("ci_low", 0.0);
    r.ci_high = e.value("ci_high", 0.0);
    r.clusters_covered = e.value("clusters_covered", 0);
    rows.push_back(r);
  }
  return rows;
}

/// Merge score tables into one systems x metrics view. All tables must
/// cover the same set of n values. The best recall per column is marked
/// with '*'; systems with a significant sign-test result for that n (p
/// below `significance`) get a dagger.
inline std::string render_report(
    const std::vector<LabeledScoreTable>& tables,
    const std::map<std::pair<std::string, int>, double>& p_values = {},
    double significance = 0.05) {
  if (tables.empty()) throw DataError("report: need >= 1 score table");

  std::set<int> n_values;
  for (const auto& r : tables.front().rows) n_values.insert(r.n);
  for (const auto& t : tables) {
    std::set<int> ns;
    for (const auto& r : t.rows) ns.insert(r.n);
    if (ns != n_values)
      throw DataError("report: column mismatch between score tables (" +
                      t.label + ")");
  }

  // (system, n) -> recall; later tables do not overwrite earlier entries
  std::map<std::pair<std::string, int>, double> cells;
  std::map<std::string, std::string> provenance;
  std::vector<std::string> system_order;
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      auto key = std::make_pair(r.system_id, r.n);
      if (!cells.count(key)) cells[key] = r.recall;
      if (!provenance.count(r.system_id)) {
        provenance[r.system_id] = t.label;
        system_order.push_back(r.system_id);
      }
    }
  }

  std::map<int, double> best;
  for (const auto& [key, v] : cells) {
    auto it = best.find(key.second);
    if (it == best.end() || v > it->second) best[key.second] = v;
  }

  std::ostringstream out;
  out << "system";
  for (int n : n_values) out << "\tR-" << n;
  out << "\tsource\n";
  out.setf(std::ios::fixed);
  out.precision(4);
  for (const auto& sys : system_order) {
    out << sys;
    for (int n : n_values) {
      auto it = cells.find({sys, n});
      out << '\t';
      if (it == cells.end()) {
        out << "-";
        continue;
      }
      out << it->second;
      if (it->second == best[n]) out << '*';
      auto pit = p_values.find({sys, n});
      if (pit != p_values.end() && pit->second < significance) out << "+";
    }
    out << '\t' << provenance[sys] << '\n';
  }
  return out.str();
}

}  // namespace sumfuse

#endif  // SUMFUSE_REPORT_HPP_

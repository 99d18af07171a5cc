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

#ifndef SUMFUSE_PAGERANK_HPP_
#define SUMFUSE_PAGERANK_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sumfuse {

/// Damped power iteration: p <- d * T p + (1 - d)/N, starting uniform,
/// until the L1 change drops below tol or max_iter is hit. `transition`
/// is column-stochastic: transition[i][j] is the mass node j sends to
/// node i. All-zero columns are treated as uniform (dangling nodes).
inline std::vector<double> pagerank(
    const std::vector<std::vector<double>>& transition, double damping,
    double tol, int max_iter) {
  if (!(damping > 0.0 && damping < 1.0))
    throw std::invalid_argument("damping must be in (0, 1)");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  const size_t n = transition.size();
  if (n == 0) return {};
  std::vector<double> p(n, 1.0 / n);
  std::vector<bool> dangling(n, false);
  for (size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (size_t i = 0; i < n; ++i) col += transition[i][j];
    dangling[j] = (col <= 0.0);
  }
  std::vector<double> next(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    double dangling_mass = 0.0;
    for (size_t j = 0; j < n; ++j)
      if (dangling[j]) dangling_mass += p[j];
    for (size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (size_t j = 0; j < n; ++j) s += transition[i][j] * p[j];
      next[i] = damping * (s + dangling_mass / n) + (1.0 - damping) / n;
    }
    double change = 0.0;
    for (size_t i = 0; i < n; ++i) change += std::fabs(next[i] - p[i]);
    p.swap(next);
    if (change < tol) break;
  }
  return p;
}

/// Column-normalize a nonnegative square weight matrix W (W[i][j] = edge
/// from j to i). Zero columns stay zero and are handled as dangling by
/// pagerank().
inline std::vector<std::vector<double>> column_normalize(
    std::vector<std::vector<double>> w) {
  const size_t n = w.size();
  for (size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (size_t i = 0; i < n; ++i) col += w[i][j];
    if (col > 0.0)
      for (size_t i = 0; i < n; ++i) w[i][j] /= col;
  }
  return w;
}

}  // namespace sumfuse

#endif  // SUMFUSE_PAGERANK_HPP_

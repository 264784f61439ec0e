// Copyright 2026 The nilcolor Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Brute-force null distributions, written without the library's ranking or
// subset-sum code.

#include <algorithm>
#include <cmath>
#include <vector>

namespace testing {

struct BruteP {
  double less = 0.0;     // P(stat <= observed)
  double greater = 0.0;  // P(stat >= observed)
};

// U_x counts pairs with x > y, ties as one half.
inline double u_count(const std::vector<double>& x, const std::vector<double>& y) {
  double u = 0.0;
  for (double a : x)
    for (double b : y) u += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
  return u;
}

// Every split of the pooled sample into groups of the original sizes.
inline BruteP brute_mann_whitney(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> pool(x);
  pool.insert(pool.end(), y.begin(), y.end());
  const int total = static_cast<int>(pool.size());
  const int n = static_cast<int>(x.size());
  const double observed = u_count(x, y);
  double le = 0, ge = 0, count = 0;
  for (unsigned mask = 0; mask < (1u << total); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    std::vector<double> a, b;
    for (int i = 0; i < total; ++i) ((mask >> i) & 1u ? a : b).push_back(pool[i]);
    const double u = u_count(a, b);
    count += 1;
    if (u <= observed + 1e-9) le += 1;
    if (u >= observed - 1e-9) ge += 1;
  }
  return {le / count, ge / count};
}

// Every sign pattern over the magnitudes; the statistic is the rank sum of
// the negative differences.
inline BruteP brute_wilcoxon_negative_sum(const std::vector<double>& diffs) {
  std::vector<double> d;
  for (double v : diffs)
    if (v != 0.0) d.push_back(v);
  const int n = static_cast<int>(d.size());
  std::vector<double> rank(n);
  for (int i = 0; i < n; ++i) {
    double below = 0, equal = 0;
    for (int j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) below += 1;
      if (std::abs(d[j]) == std::abs(d[i])) equal += 1;
    }
    rank[i] = below + (equal + 1.0) / 2.0;
  }
  double observed = 0;
  for (int i = 0; i < n; ++i)
    if (d[i] < 0) observed += rank[i];
  double le = 0, ge = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double t = 0;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) t += rank[i];
    if (t <= observed + 1e-9) le += 1;
    if (t >= observed - 1e-9) ge += 1;
  }
  const double total = std::ldexp(1.0, n);
  return {le / total, ge / total};
}

}  // namespace testing

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

#include "stats.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nilcolor::stats {

namespace {

// Sum over tie groups of t^3 - t.
double tie_term(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  double term = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double t = static_cast<double>(j - i);
    term += t * t * t - t;
    i = j;
  }
  return term;
}

// counts[k][s]: number of size-k subsets of `items` with sum s. Items are
// doubled midranks, so every sum is an integer.
std::vector<std::vector<double>> subset_sum_counts(const std::vector<int>& items, int max_size) {
  const int total = std::accumulate(items.begin(), items.end(), 0);
  std::vector<std::vector<double>> counts(static_cast<std::size_t>(max_size) + 1,
                                          std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  counts[0][0] = 1.0;
  for (int item : items) {
    for (int k = max_size; k >= 1; --k) {
      for (int s = total; s >= item; --s) counts[k][s] += counts[k - 1][s - item];
    }
  }
  return counts;
}

std::vector<int> doubled(const std::vector<double>& ranks) {
  std::vector<int> out;
  out.reserve(ranks.size());
  for (double r : ranks) out.push_back(static_cast<int>(std::lround(2.0 * r)));
  return out;
}

double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mid;
    i = j;
  }
  return ranks;
}

TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y, Sided sided,
                          Direction direction, bool allow_exact) {
  if (x.empty() || y.empty()) fail(ErrorKind::validation, "Mann-Whitney U needs two nonempty samples");
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(y.size());
  std::vector<double> all(x.begin(), x.end());
  all.insert(all.end(), y.begin(), y.end());
  for (double v : all) {
    if (!std::isfinite(v)) fail(ErrorKind::validation, "Mann-Whitney U: non-finite observation");
  }
  const std::vector<double> ranks = midranks(all);
  const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + n, 0.0);
  const double u = rank_sum - 0.5 * n * (n + 1.0);
  const double mean = 0.5 * n * m;

  TestResult r;
  r.statistic = u;
  r.n = n;
  r.m = m;
  r.sided = sided;

  if (allow_exact && n + m <= kExactMannWhitneyMaxTotal) {
    r.method = Method::exact;
    const std::vector<int> items = doubled(ranks);
    const auto counts = subset_sum_counts(items, n);
    const int observed = static_cast<int>(std::lround(2.0 * rank_sum));
    double total = 0.0, le = 0.0, ge = 0.0;
    for (std::size_t s = 0; s < counts[n].size(); ++s) {
      const double c = counts[n][s];
      total += c;
      if (static_cast<int>(s) <= observed) le += c;
      if (static_cast<int>(s) >= observed) ge += c;
    }
    const double p_le = le / total;
    const double p_ge = ge / total;
    if (sided == Sided::two) {
      r.p_value = clamp_p(2.0 * std::min(p_le, p_ge));
    } else {
      r.p_value = direction == Direction::less ? p_le : p_ge;
    }
    return r;
  }

  r.method = Method::normal_approximation;
  const double big_n = n + m;
  const double var = n * m / 12.0 * ((big_n + 1.0) - tie_term(all) / (big_n * (big_n - 1.0)));
  if (!(var > 0.0)) {
    r.p_value = 1.0;
    return r;
  }
  const double sd = std::sqrt(var);
  if (sided == Sided::two) {
    const double z = std::max(0.0, std::abs(u - mean) - 0.5) / sd;
    r.p_value = clamp_p(2.0 * (1.0 - normal_cdf(z)));
  } else if (direction == Direction::less) {
    r.p_value = clamp_p(normal_cdf((u + 0.5 - mean) / sd));
  } else {
    r.p_value = clamp_p(1.0 - normal_cdf((u - 0.5 - mean) / sd));
  }
  return r;
}

TestResult wilcoxon_signed_rank(std::span<const double> diffs, Sided sided, Direction direction,
                                bool allow_exact) {
  std::vector<double> nonzero;
  for (double d : diffs) {
    if (!std::isfinite(d)) fail(ErrorKind::validation, "Wilcoxon: non-finite difference");
    if (d != 0.0) nonzero.push_back(d);
  }
  if (nonzero.empty()) fail(ErrorKind::validation, "Wilcoxon: all differences are zero");
  const int n = static_cast<int>(nonzero.size());
  std::vector<double> magnitudes;
  for (double d : nonzero) magnitudes.push_back(std::abs(d));
  const std::vector<double> ranks = midranks(magnitudes);
  double t_plus = 0.0, t_minus = 0.0;
  for (int i = 0; i < n; ++i) (nonzero[i] > 0 ? t_plus : t_minus) += ranks[i];

  TestResult r;
  r.n = n;
  r.sided = sided;
  if (sided == Sided::two) {
    r.statistic = std::min(t_plus, t_minus);
  } else {
    r.statistic = direction == Direction::greater ? t_minus : t_plus;
  }

  if (allow_exact && n <= kExactWilcoxonMaxN) {
    r.method = Method::exact;
    // Under H0 each rank carries either sign with probability 1/2, so the
    // statistic is the sum of a uniformly random subset of the ranks.
    const std::vector<int> items = doubled(ranks);
    const auto counts = subset_sum_counts(items, n);
    std::vector<double> dist(counts[0].size(), 0.0);
    for (const auto& row : counts) {
      for (std::size_t s = 0; s < row.size(); ++s) dist[s] += row[s];
    }
    const double total = std::ldexp(1.0, n);
    const int observed = static_cast<int>(std::lround(2.0 * r.statistic));
    double le = 0.0;
    for (int s = 0; s <= observed && s < static_cast<int>(dist.size()); ++s) le += dist[s];
    const double p_le = le / total;
    r.p_value = clamp_p(sided == Sided::two ? 2.0 * p_le : p_le);
    return r;
  }

  r.method = Method::normal_approximation;
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term(magnitudes) / 48.0;
  const double z = (r.statistic + 0.5 - mean) / std::sqrt(var);
  const double p_le = normal_cdf(z);
  r.p_value = clamp_p(sided == Sided::two ? 2.0 * p_le : p_le);
  return r;
}

BonferroniResult bonferroni(std::span<const double> p_values, double alpha) {
  BonferroniResult out;
  const double k = static_cast<double>(p_values.size());
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::validation, "p-value outside [0,1]");
    const double adj = std::min(1.0, p * k);
    out.adjusted.push_back(adj);
    out.reject.push_back(adj <= alpha);
  }
  return out;
}

}  // namespace nilcolor::stats

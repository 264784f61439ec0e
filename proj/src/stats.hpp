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

// Rank tests: Mann-Whitney U, Wilcoxon signed-rank, Bonferroni correction.
//
// Exact p-values come from the permutation distribution of the (mid)ranks,
// computed by subset-sum counting; ties are therefore handled exactly in the
// small-sample regime. Larger samples use the normal approximation with tie
// corrected variance and a 0.5 continuity correction.

#pragma once

#include <span>
#include <vector>

namespace nilcolor::stats {

enum class Method { exact, normal_approximation };
enum class Sided { one, two };

/// For Mann-Whitney, `less` is the alternative that x tends to be smaller
/// than y. For Wilcoxon, `greater` is the alternative that differences tend
/// to be positive.
enum class Direction { less, greater };

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int n = 0;
  int m = 0;  // second sample size; 0 for paired tests
  Method method = Method::exact;
  Sided sided = Sided::two;
};

inline constexpr int kExactMannWhitneyMaxTotal = 12;
inline constexpr int kExactWilcoxonMaxN = 12;

/// Midranks (1-based) of the values, ties sharing the mean rank.
std::vector<double> midranks(std::span<const double> values);

/// Statistic is U_x = R_x - n(n+1)/2, the number of (x,y) pairs with x > y
/// counting ties as one half.
/// `allow_exact = false` forces the normal approximation.
TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                          Sided sided = Sided::two, Direction direction = Direction::less,
                          bool allow_exact = true);

/// Zero differences are dropped before ranking. For a one-sided test the
/// statistic is the rank sum of the differences opposing the alternative
/// (T- for `greater`, T+ for `less`); two-sided reports min(T+, T-).
TestResult wilcoxon_signed_rank(std::span<const double> diffs, Sided sided = Sided::one,
                                Direction direction = Direction::greater, bool allow_exact = true);

struct BonferroniResult {
  std::vector<double> adjusted;
  std::vector<bool> reject;
};

BonferroniResult bonferroni(std::span<const double> p_values, double alpha = 0.05);

double normal_cdf(double z) noexcept;

}  // namespace nilcolor::stats

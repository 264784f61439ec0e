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
#include <doctest.h>

#include <random>
#include <vector>

#include "brute_stats.hpp"
#include "stats.hpp"
#include "support.hpp"

using namespace nilcolor;
using namespace nilcolor::stats;

namespace {

std::vector<double> draw(int n, std::mt19937_64& rng, bool ties) {
  std::vector<double> v;
  std::uniform_int_distribution<int> small(0, 4);
  std::normal_distribution<double> cont(0.0, 1.0);
  for (int i = 0; i < n; ++i) v.push_back(ties ? small(rng) : cont(rng));
  return v;
}

}  // namespace

TEST_CASE("Mann-Whitney documented examples") {
  const std::vector<double> x{1, 2}, y{3, 4};
  const TestResult r = mann_whitney_u(x, y, Sided::one, Direction::less);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(r.method == Method::exact);

  CHECK(mann_whitney_u(x, x, Sided::two).p_value == 1.0);

  std::vector<double> lo, hi;
  for (int i = 0; i < 40; ++i) {
    lo.push_back(i);
    hi.push_back(100 + i);
  }
  const TestResult big = mann_whitney_u(lo, hi, Sided::one, Direction::less);
  CHECK(big.method == Method::normal_approximation);
  CHECK(big.p_value < 0.001);

  CHECK_ERROR_KIND(mann_whitney_u(std::vector<double>{}, y), validation);
}

TEST_CASE("Wilcoxon documented examples") {
  const TestResult r = wilcoxon_signed_rank(std::vector<double>{1, 2, 3}, Sided::one, Direction::greater);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(wilcoxon_signed_rank(std::vector<double>{1, -1}, Sided::one, Direction::greater).p_value ==
        doctest::Approx(0.75));
  CHECK(wilcoxon_signed_rank(std::vector<double>{-1, -2, -3}, Sided::one, Direction::greater).p_value >= 0.875);
  const TestResult z = wilcoxon_signed_rank(std::vector<double>{0, 0, 1, 2, 3});
  CHECK(z.n == 3);
  CHECK(z.p_value == doctest::Approx(0.125));
  CHECK_ERROR_KIND(wilcoxon_signed_rank(std::vector<double>{0, 0}), validation);
}

TEST_CASE("exact tests agree with brute-force enumeration") {
  std::mt19937_64 rng(2024);
  for (int total = 2; total <= 8; ++total) {
    for (int n = 1; n < total; ++n) {
      for (int rep = 0; rep < 6; ++rep) {
        const bool ties = rep % 2 == 1;
        const auto x = draw(n, rng, ties), y = draw(total - n, rng, ties);
        const testing::BruteP b = testing::brute_mann_whitney(x, y);
        CHECK(mann_whitney_u(x, y, Sided::one, Direction::less).p_value == doctest::Approx(b.less).epsilon(1e-12));
        CHECK(mann_whitney_u(x, y, Sided::one, Direction::greater).p_value ==
              doctest::Approx(b.greater).epsilon(1e-12));
        CHECK(mann_whitney_u(x, y, Sided::two).p_value ==
              doctest::Approx(std::min(1.0, 2 * std::min(b.less, b.greater))).epsilon(1e-12));
      }
    }
    for (int rep = 0; rep < 10; ++rep) {
      auto d = draw(total, rng, rep % 2 == 1);
      for (double& v : d) v -= 1.5;
      bool any = false;
      for (double v : d) any = any || v != 0.0;
      if (!any) continue;
      const testing::BruteP b = testing::brute_wilcoxon_negative_sum(d);
      CHECK(wilcoxon_signed_rank(d, Sided::one, Direction::greater).p_value ==
            doctest::Approx(b.less).epsilon(1e-12));
      // T+ small under `less` is T- large.
      CHECK(wilcoxon_signed_rank(d, Sided::one, Direction::less).p_value ==
            doctest::Approx(b.greater).epsilon(1e-12));
    }
  }
}

TEST_CASE("normal approximation tracks the exact p-value at sizes 10-12") {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int t = 0; t < 300; ++t) {
    const int total = 10 + t % 3;
    const int n = total / 2;
    const auto x = draw(n, rng, false), y = draw(total - n, rng, false);
    for (Direction dir : {Direction::less, Direction::greater}) {
      const double e = mann_whitney_u(x, y, Sided::one, dir).p_value;
      const double a = mann_whitney_u(x, y, Sided::one, dir, false).p_value;
      worst = std::max(worst, std::abs(e - a));
    }
    const auto d = draw(total, rng, false);
    const double e = wilcoxon_signed_rank(d).p_value;
    const double a = wilcoxon_signed_rank(d, Sided::one, Direction::greater, false).p_value;
    worst = std::max(worst, std::abs(e - a));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("U statistics add up and shifting y helps x < y") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto x = draw(7, rng, false), y = draw(9, rng, false);
    const double ux = mann_whitney_u(x, y).statistic;
    const double uy = mann_whitney_u(y, x).statistic;
    CHECK(ux + uy == doctest::Approx(63.0));
    auto shifted = y;
    for (double& v : shifted) v += 0.5;
    CHECK(mann_whitney_u(x, shifted, Sided::one, Direction::less).p_value <=
          mann_whitney_u(x, y, Sided::one, Direction::less).p_value);
  }
}

TEST_CASE("midranks") {
  CHECK(midranks(std::vector<double>{3, 1, 3, 2}) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("Bonferroni") {
  CHECK(bonferroni(std::vector<double>{0.03}).adjusted == std::vector<double>{0.03});
  const BonferroniResult two = bonferroni(std::vector<double>{0.01, 0.04}, 0.05);
  CHECK(two.adjusted[0] == doctest::Approx(0.02));
  CHECK(two.adjusted[1] == doctest::Approx(0.08));
  CHECK(two.reject == std::vector<bool>{true, false});
  CHECK(bonferroni(std::vector<double>{0.6, 0.1, 0.2}).adjusted[0] == 1.0);
  CHECK_ERROR_KIND(bonferroni(std::vector<double>{1.5}), validation);
}

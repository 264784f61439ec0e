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

#include <cmath>
#include <sstream>

#include "color_domain.hpp"
#include "ib.hpp"
#include "support.hpp"

using namespace nilcolor;

namespace {

std::string table_without(int skipped) {
  std::istringstream in(bundled_chip_table());
  std::ostringstream out;
  std::string line;
  int n = -1;
  while (std::getline(in, line)) {
    if (n++ == skipped) continue;
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("bundled grid has 330 chips and a uniform prior") {
  const ChipGrid grid = default_chip_grid();
  REQUIRE(grid.size() == 330);
  int achromatic = 0;
  for (const Chip& c : grid.chips()) {
    CHECK(c.lab[0] >= 0.0);
    CHECK(c.lab[0] <= 100.0);
    if (c.column == 0) ++achromatic;
  }
  CHECK(achromatic == 10);
  for (int i = 0; i < grid.size(); ++i) CHECK(grid.prior()[i] == doctest::Approx(1.0 / 330).epsilon(1e-15));
  CHECK(std::abs(grid.prior().sum() - 1.0) < 1e-9);
}

TEST_CASE("chip table loading") {
  SUBCASE("a missing row is a format error") {
    std::istringstream in(table_without(17));
    CHECK_ERROR_KIND(load_chip_grid(in), format);
  }
  SUBCASE("a duplicated index is a format error") {
    std::string text = bundled_chip_table();
    text += "5\tA\t0\t50\t0\t0\n";
    std::istringstream in(text);
    CHECK_ERROR_KIND(load_chip_grid(in), format);
  }
  SUBCASE("loading is deterministic") {
    std::istringstream a(bundled_chip_table()), b(bundled_chip_table());
    CHECK(load_chip_grid(a).hash() == load_chip_grid(b).hash());
  }
  SUBCASE("prior that does not sum to one") {
    std::ostringstream prior;
    for (int i = 0; i < 330; ++i) prior << i << '\t' << 0.004 << '\n';
    std::istringstream coords(bundled_chip_table()), p1(prior.str());
    CHECK_ERROR_KIND(load_chip_grid(coords, &p1), validation);
    std::istringstream coords2(bundled_chip_table()), p2(prior.str());
    GridLoadOptions opts;
    opts.renormalize_prior = true;
    const ChipGrid g = load_chip_grid(coords2, &p2, opts);
    CHECK(g.prior().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("explicit uniform prior gives the same analysis as the fallback") {
  std::ostringstream prior;
  prior.precision(17);
  for (int i = 0; i < 330; ++i) prior << i << '\t' << 1.0 / 330 << '\n';
  std::istringstream coords(bundled_chip_table()), p(prior.str());
  const ChipGrid with_prior = load_chip_grid(coords, &p);
  const ChipGrid fallback = default_chip_grid();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const NamingSystem sys = testing::random_system(4, 330, rng);
    CHECK(complexity(sys, with_prior) == complexity(sys, fallback));
  }
}

TEST_CASE("perceptual distance") {
  CHECK(perceptual_distance_sq(Lab{0, 0, 0}, Lab{3, 4, 0}) == 25.0);
  const ChipGrid grid = default_chip_grid();
  for (int a = 0; a < grid.size(); ++a) {
    CHECK(perceptual_distance_sq(grid.chip(a), grid.chip(a)) == 0.0);
    for (int b = 0; b < grid.size(); ++b) {
      const double d = perceptual_distance_sq(grid.chip(a), grid.chip(b));
      if (d != perceptual_distance_sq(grid.chip(b), grid.chip(a))) FAIL("asymmetric at " << a << "," << b);
      if (a == b + 7) {
        double sum = 0.0;
        for (int k = 0; k < 3; ++k) sum += std::pow(grid.chip(a).lab[k] - grid.chip(b).lab[k], 2);
        CHECK(d == doctest::Approx(sum).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("meaning model") {
  const ChipGrid grid = default_chip_grid();
  SUBCASE("rows are distributions peaked on the diagonal") {
    for (double s2 : {1.0, 64.0, 500.0}) {
      const MeaningModel mm = build_meaning_model(grid, s2);
      for (int c = 0; c < mm.size(); ++c) {
        CHECK(std::abs(mm.likelihood().row(c).sum() - 1.0) < 1e-9);
        Eigen::Index arg = 0;
        mm.likelihood().row(c).maxCoeff(&arg);
        CHECK(arg == c);
      }
    }
  }
  SUBCASE("tiny width approaches the identity") {
    const MeaningModel mm = build_meaning_model(grid, 1e-6);
    CHECK((mm.likelihood() - Eigen::MatrixXd::Identity(330, 330)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("four-chip toy matches hand-normalized exponentials") {
    const ChipGrid toy = testing::tiny_grid({{50, 0, 0}, {50, 8, 0}, {50, 0, 16}, {60, 0, 0}});
    const MeaningModel mm = build_meaning_model(toy, 64.0);
    // Squared distances from chip 0: 0, 64, 256, 100.
    const double w[4] = {1.0, std::exp(-0.5), std::exp(-2.0), std::exp(-100.0 / 128.0)};
    const double z = w[0] + w[1] + w[2] + w[3];
    for (int u = 0; u < 4; ++u) CHECK(mm.likelihood()(0, u) == doctest::Approx(w[u] / z).epsilon(1e-14));
  }
  CHECK_ERROR_KIND(build_meaning_model(grid, 0.0), validation);
}

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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ib.hpp"
#include "random_model.hpp"
#include "support.hpp"

using namespace nilcolor;

namespace {

// Term-by-term sum, written independently of the library.
double mi_oracle(const Eigen::MatrixXd& j) {
  double total = 0.0;
  for (int r = 0; r < j.rows(); ++r) {
    for (int c = 0; c < j.cols(); ++c) {
      if (j(r, c) == 0.0) continue;
      total += j(r, c) * std::log2(j(r, c) / (j.row(r).sum() * j.col(c).sum()));
    }
  }
  return std::max(total, 0.0);
}

// I(W;U) via an explicit w x c x u loop.
double accuracy_oracle(const NamingSystem& s, const ChipGrid& g, const MeaningModel& mm) {
  const int k = s.num_words(), n = g.size();
  Eigen::MatrixXd wu = Eigen::MatrixXd::Zero(k, n);
  for (int w = 0; w < k; ++w)
    for (int c = 0; c < n; ++c)
      for (int u = 0; u < n; ++u) wu(w, u) += g.prior()[c] * s(w, c) * mm.likelihood()(c, u);
  return mi_oracle(wu);
}

IBCurve tiny_curve(const ChipGrid& g, const MeaningModel& mm, int words, int steps) {
  FrontierOptions o;
  o.betas = annealing_beta_schedule(8192.0, steps);
  o.max_words = words;
  o.keep_encoders = true;
  return ib_frontier(g, mm, o);
}

}  // namespace

TEST_CASE("mutual information") {
  Eigen::MatrixXd diag(2, 2);
  diag << 0.5, 0, 0, 0.5;
  CHECK(mutual_information(diag) == doctest::Approx(1.0).epsilon(1e-15));

  Eigen::Vector3d a(0.2, 0.3, 0.5);
  Eigen::Vector4d b(0.1, 0.2, 0.3, 0.4);
  CHECK(mutual_information(a * b.transpose()) < 1e-12);

  Eigen::MatrixXd j3(3, 3);
  j3 << 0.10, 0.05, 0.02, 0.03, 0.25, 0.07, 0.01, 0.12, 0.35;
  CHECK(std::abs(mutual_information(j3) - mi_oracle(j3)) < 1e-12);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(2, 5);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::MatrixXd j = testing::random_joint(dim(rng), dim(rng), rng);
    const double got = mutual_information(j);
    if (std::abs(got - mi_oracle(j)) > 1e-12) FAIL("oracle mismatch on trial " << t);
    CHECK(got >= 0.0);
  }

  Eigen::MatrixXd neg = diag;
  neg(0, 1) = -0.1;
  neg(0, 0) = 0.6;
  CHECK_ERROR_KIND(mutual_information(neg), validation);
  CHECK_ERROR_KIND(mutual_information(diag * 2.0), validation);
}

TEST_CASE("complexity and accuracy") {
  const ChipGrid grid = default_chip_grid();
  const MeaningModel mm = build_meaning_model(grid, 64.0);

  CHECK(complexity(NamingSystem::constant(330), grid) == doctest::Approx(0.0));
  CHECK(accuracy(NamingSystem::constant(330), grid, mm) < 1e-12);
  NamingSystem identity(Eigen::MatrixXd::Identity(330, 330));
  CHECK(complexity(identity, grid) == doctest::Approx(std::log2(330.0)).epsilon(1e-12));
  CHECK(accuracy(identity, grid, mm) == doctest::Approx(meaning_information(grid, mm)).epsilon(1e-10));

  std::mt19937_64 rng(5);
  const double ceiling = meaning_information(grid, mm);
  for (int t = 0; t < 40; ++t) {
    const auto [params, sys] = sample_rm_system(grid, 3 + t % 8, rng());
    const IBPoint p = evaluate(sys, grid, mm);
    CHECK(p.complexity >= 0.0);
    CHECK(p.accuracy >= 0.0);
    CHECK(p.accuracy <= p.complexity + 1e-6);
    CHECK(p.accuracy < ceiling);
  }

  const ChipGrid toy = testing::tiny_grid({{50, 0, 0}, {55, 5, 0}, {40, 0, 20}, {70, -10, 5}});
  const MeaningModel tmm = build_meaning_model(toy, 64.0);
  Eigen::MatrixXd q(2, 4);
  q << 0.9, 0.6, 0.2, 0.05, 0.1, 0.4, 0.8, 0.95;
  const NamingSystem sys(q);
  CHECK(std::abs(accuracy(sys, toy, tmm) - accuracy_oracle(sys, toy, tmm)) < 1e-12);

  CHECK_ERROR_KIND(complexity(sys, grid), validation);
}

TEST_CASE("frontier on a tiny three-cluster domain") {
  const ChipGrid g = testing::three_cluster_grid();
  const MeaningModel mm = build_meaning_model(g, 64.0);
  const IBCurve curve = tiny_curve(g, mm, 3, 300);
  REQUIRE(!curve.points.empty());

  SUBCASE("beta = 1 endpoint attains the trivial objective") {
    // Here the clusters barely overlap, so the cluster code ties with the
    // constant code at beta = 1.
    CHECK(curve.betas.back() == 1.0);
    CHECK(curve.points.back().complexity - curve.points.back().accuracy < 1e-3);
  }
  SUBCASE("accuracy is nondecreasing in complexity") {
    std::vector<IBPoint> pts = curve.points;
    std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.complexity < b.complexity; });
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].accuracy >= pts[i - 1].accuracy - 1e-9);
  }
  SUBCASE("highest beta reaches the best deterministic 3-word encoder") {
    double best = 0.0;
    std::vector<int> labels(6, 0);
    for (int code = 0; code < 729; ++code) {
      for (int c = 0, r = code; c < 6; ++c, r /= 3) labels[c] = r % 3;
      best = std::max(best, accuracy(testing::deterministic(labels, 3), g, mm));
    }
    const double top = curve.points.front().accuracy;
    CHECK(top >= best - 1e-3);
    CHECK(top <= meaning_information(g, mm) + 1e-9);
    CHECK(best == doctest::Approx(accuracy(testing::deterministic({0, 0, 1, 1, 2, 2}, 3), g, mm)));
  }
  SUBCASE("curve optimal encoders have zero inefficiency") {
    REQUIRE(curve.encoders.size() == curve.points.size());
    for (std::size_t i = 0; i < curve.encoders.size(); i += 17) {
      CHECK(inefficiency_epsilon(curve.encoders[i], curve, g, mm).epsilon <= 1e-6);
    }
  }
  SUBCASE("random systems lie on or below the frontier") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 200; ++t) {
      const NamingSystem s = testing::random_system(2 + t % 3, 6, rng);
      const IBPoint p = evaluate(s, g, mm);
      CHECK(p.accuracy <= frontier_accuracy_at(curve, p.complexity) + 1e-3);
      CHECK(inefficiency_epsilon(p, curve).epsilon >= 0.0);
    }
  }
  SUBCASE("halving the beta step barely moves epsilon") {
    const IBCurve fine = tiny_curve(g, mm, 3, 600);
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
      const NamingSystem s = testing::random_system(3, 6, rng);
      const double coarse_eps = inefficiency_epsilon(s, curve, g, mm).epsilon;
      const double fine_eps = inefficiency_epsilon(s, fine, g, mm).epsilon;
      CHECK(std::abs(coarse_eps - fine_eps) < 1e-3);
    }
  }
}

TEST_CASE("inefficiency needs a curve") {
  CHECK_ERROR_KIND(inefficiency_epsilon(IBPoint{}, IBCurve{}), validation);
}

TEST_CASE("curve csv round trip") {
  const ChipGrid g = testing::three_cluster_grid();
  const IBCurve curve = tiny_curve(g, build_meaning_model(g, 64.0), 3, 40);
  std::stringstream s;
  write_curve_csv(s, curve);
  const IBCurve back = read_curve_csv(s);
  REQUIRE(back.points.size() == curve.points.size());
  for (std::size_t i = 0; i < back.points.size(); ++i) {
    CHECK(back.betas[i] == curve.betas[i]);
    CHECK(back.points[i].complexity == curve.points[i].complexity);
    CHECK(back.points[i].accuracy == curve.points[i].accuracy);
  }
}

TEST_CASE("gNID") {
  const ChipGrid grid = default_chip_grid();
  std::mt19937_64 rng(17);
  std::vector<int> split(330);
  for (int c = 0; c < 330; ++c) split[c] = c % 2;
  const NamingSystem a = testing::deterministic(split, 2);

  CHECK(gnid(a, a, grid) < 1e-12);
  const NamingSystem swapped = testing::deterministic([&] {
    auto s = split;
    for (int& w : s) w = 1 - w;
    return s;
  }(), 2);
  CHECK(gnid(a, swapped, grid) < 1e-12);

  const NamingSystem coin(Eigen::MatrixXd::Constant(2, 330, 0.5));
  CHECK(gnid(a, coin, grid) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gnid(NamingSystem::constant(330), NamingSystem::constant(330), grid) == 0.0);

  for (int t = 0; t < 30; ++t) {
    const auto [pa, x] = sample_rm_system(grid, 3 + t % 5, rng());
    const auto [pb, y] = sample_rm_system(grid, 3 + (t + 2) % 6, rng());
    CHECK(std::abs(gnid(x, y, grid) - gnid(y, x, grid)) <= 1e-9);
    std::vector<int> perm(static_cast<std::size_t>(x.num_words()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd shuffled(x.num_words(), 330);
    for (int w = 0; w < x.num_words(); ++w) shuffled.row(perm[w]) = x.encoder().row(w);
    CHECK(std::abs(gnid(NamingSystem(shuffled), y, grid) - gnid(x, y, grid)) < 1e-12);
    const double d = gnid(x, y, grid);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0 + 1e-9);
  }
}

TEST_CASE("closest reference") {
  const ChipGrid grid = default_chip_grid();
  std::vector<NamingSystem> refs;
  for (std::uint64_t s = 1; s <= 3; ++s) refs.push_back(sample_rm_system(grid, 4, s).second);
  const NamingSystem probe = sample_rm_system(grid, 5, 99).second;

  auto [d, idx] = min_gnid_to_set(probe, refs, grid);
  int brute = 0;
  for (int i = 1; i < 3; ++i) {
    if (gnid(probe, refs[i], grid) < gnid(probe, refs[brute], grid)) brute = i;
  }
  CHECK(idx == brute);
  CHECK(d == gnid(probe, refs[brute], grid));

  auto [self_d, self_idx] = min_gnid_to_set(refs[1], refs, grid);
  CHECK(self_d < 1e-12);
  CHECK(self_idx == 1);

  std::vector<NamingSystem> twins{refs[2], refs[2]};
  CHECK(min_gnid_to_set(probe, twins, grid).second == 0);
  CHECK(min_gnid_to_set(probe, std::span(refs).first(1), grid).first == gnid(probe, refs[0], grid));
  CHECK_ERROR_KIND(min_gnid_to_set(probe, std::span<const NamingSystem>{}, grid), validation);
}

TEST_CASE("mode map") {
  const NamingSystem det = testing::deterministic({2, 0, 1, 1}, 3);
  const ModeMap m = mode_map(det);
  CHECK(m.word == std::vector<int>{2, 0, 1, 1});
  for (Band b : m.band) CHECK(b == Band::strong);

  const ModeMap u = mode_map(NamingSystem(Eigen::MatrixXd::Constant(4, 5, 0.25)));
  for (int c = 0; c < 5; ++c) {
    CHECK(u.word[c] == 0);
    CHECK(u.band[c] == Band::none);
  }
  CHECK(band_of(0.75) == Band::strong);
  CHECK(band_of(0.7499) == Band::faded);
  CHECK(band_of(0.3) == Band::faded);
  CHECK(band_of(0.2999) == Band::none);

  // Two far prototypes: the mode is the nearer one.
  const ChipGrid grid = default_chip_grid();
  int dark = 0, light = 0;
  for (int c = 0; c < 330; ++c) {
    if (grid.chip(c).lab[0] < grid.chip(dark).lab[0]) dark = c;
    if (grid.chip(c).lab[0] > grid.chip(light).lab[0]) light = c;
  }
  RMParams p;
  p.num_words = 2;
  p.eta = 0.003;
  p.prototypes = {dark, light};
  const ModeMap near = mode_map(kernel_system(grid, p));
  for (int c = 0; c < 330; ++c) {
    const double dd = perceptual_distance_sq(grid.chip(c), grid.chip(dark));
    const double dl = perceptual_distance_sq(grid.chip(c), grid.chip(light));
    if (dd != dl) CHECK(near.word[c] == (dd < dl ? 0 : 1));
  }
}

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

#include <sstream>

#include "random_model.hpp"
#include "support.hpp"
#include "wcs.hpp"

using namespace nilcolor;

namespace {

RMBatchConfig small_config(int threads = 1) {
  RMBatchConfig cfg;
  cfg.per_k = 4;
  cfg.k_min = 3;
  cfg.k_max = 6;
  cfg.seed = 31;
  cfg.threads = threads;
  return cfg;
}

std::string manifest_of(const RMBatch& b) {
  std::ostringstream out;
  write_rm_manifest(out, b);
  return out.str();
}

}  // namespace

TEST_CASE("sampling a kernel system") {
  const ChipGrid grid = default_chip_grid();
  SUBCASE("eta stays in its interval and prototypes are distinct") {
    for (std::uint64_t s = 0; s < 10000; ++s) {
      const auto [p, sys] = sample_rm_system(grid, 1 + s % 10, s);
      if (p.eta < kEtaLow || p.eta > kEtaHigh) FAIL("eta out of range: " << p.eta);
      std::vector<int> protos = p.prototypes;
      std::sort(protos.begin(), protos.end());
      CHECK(std::adjacent_find(protos.begin(), protos.end()) == protos.end());
      if (s % 500 == 0) {
        for (int c = 0; c < 330; ++c) CHECK(std::abs(sys.encoder().col(c).sum() - 1.0) < 1e-9);
      }
    }
  }
  SUBCASE("one word carries no information") {
    const auto [p, sys] = sample_rm_system(grid, 1, 4);
    CHECK(sys.num_words() == 1);
    CHECK(complexity(sys, grid) == doctest::Approx(0.0));
  }
  SUBCASE("coincident prototypes split every chip evenly") {
    const ChipGrid g = testing::tiny_grid({{40, 10, 10}, {40, 10, 10}, {70, -20, 5}, {20, 0, 30}});
    RMParams p;
    p.num_words = 2;
    p.eta = 0.004;
    p.prototypes = {0, 1};
    const NamingSystem sys = kernel_system(g, p);
    for (int c = 0; c < 4; ++c) {
      CHECK(sys(0, c) == doctest::Approx(0.5).epsilon(1e-15));
      CHECK(sys(1, c) == doctest::Approx(0.5).epsilon(1e-15));
    }
  }
  SUBCASE("determinism and bounds") {
    CHECK(sample_rm_system(grid, 7, 123).second.encoder() == sample_rm_system(grid, 7, 123).second.encoder());
    CHECK_ERROR_KIND(sample_rm_system(grid, 331, 1), validation);
    CHECK_ERROR_KIND(sample_rm_system(grid, 0, 1), validation);
  }
  SUBCASE("sharper kernels never lose complexity") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      RMParams p = sample_rm_system(grid, 3 + s % 6, s).first;
      double last = -1.0;
      for (double eta : {0.0005, 0.001, 0.002, 0.003, 0.005, 0.01}) {
        p.eta = eta;
        const double cx = complexity(kernel_system(grid, p), grid);
        CHECK(cx >= last - 1e-12);
        last = cx;
      }
    }
  }
}

TEST_CASE("RM batch") {
  const ChipGrid grid = default_chip_grid();
  const MeaningModel mm = build_meaning_model(grid);
  const IBCurve& curve = testing::shared_frontier();
  const std::vector<NamingSystem> refs = encoders_of(fixture_languages(grid, 12));

  const RMBatch batch = generate_rm_batch(grid, mm, curve, refs, small_config());
  REQUIRE(batch.systems.size() == 16);
  for (const RMEntry& e : batch.systems) {
    CHECK(e.point.complexity >= 0.84);
    CHECK(e.point.complexity <= 2.65);
    CHECK(e.point.epsilon.value() >= 0.0);
    CHECK(e.label == (e.min_gnid < 0.29 ? RMLabel::similar : RMLabel::dissimilar));
  }

  SUBCASE("same seed gives byte-identical manifests, serial or threaded") {
    CHECK(manifest_of(generate_rm_batch(grid, mm, curve, refs, small_config())) == manifest_of(batch));
    CHECK(manifest_of(generate_rm_batch(grid, mm, curve, refs, small_config(3))) == manifest_of(batch));
  }
  SUBCASE("degenerate thresholds") {
    RMBatch b = batch;
    relabel(b, 0.0);
    CHECK(dissimilar_fraction(b) == 1.0);
    relabel(b, 1.0);
    CHECK(dissimilar_fraction(b) == 0.0);
  }
  SUBCASE("manifest round trip regenerates the systems") {
    std::istringstream in(manifest_of(batch));
    const RMBatch back = read_rm_manifest(in, grid);
    REQUIRE(back.systems.size() == batch.systems.size());
    for (std::size_t i = 0; i < back.systems.size(); ++i) {
      CHECK(back.systems[i].system.encoder() == batch.systems[i].system.encoder());
      CHECK(back.systems[i].label == batch.systems[i].label);
    }
  }
  SUBCASE("an unreachable range aborts instead of looping") {
    RMBatchConfig cfg = small_config();
    cfg.complexity_low = 6.0;
    cfg.complexity_high = 7.0;
    cfg.max_consecutive_rejections = 200;
    CHECK_ERROR_KIND(generate_rm_batch(grid, mm, curve, refs, cfg), numerical);
  }
}

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

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "random_model.hpp"
#include "report.hpp"
#include "support.hpp"
#include "wcs.hpp"

using namespace nilcolor;
namespace fs = std::filesystem;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("CIELAB to sRGB") {
  CHECK(lab_to_srgb({100, 0, 0}) == Rgb8{255, 255, 255});
  CHECK(lab_to_srgb({0, 0, 0}) == Rgb8{0, 0, 0});
  CHECK(lab_to_srgb({50, 0, 0}) == Rgb8{119, 119, 119});
  CHECK(lab_to_srgb({53.2408, 80.0925, 67.2032}) == Rgb8{255, 0, 0});
  CHECK(lab_to_srgb({32.2970, 79.1875, -107.8602}) == Rgb8{0, 0, 255});
  CHECK(lab_to_srgb({50, 200, -200})[1] == 0);  // clipped
  CHECK(hex_color(Rgb8{255, 0, 16}) == "#ff0010");
}

TEST_CASE("colour-map mosaic") {
  const ChipGrid grid = default_chip_grid();
  SUBCASE("one word fills the grid unfaded in one colour") {
    const auto cells = render_map(NamingSystem::constant(330), grid);
    REQUIRE(cells.size() == static_cast<std::size_t>(kMosaicRows * kMosaicCols));
    int chips = 0;
    Rgb8 colour{};
    for (const MosaicCell& c : cells) {
      if (c.chip < 0) continue;
      if (chips++ == 0) colour = c.rgb;
      CHECK(c.band == Band::strong);
      CHECK(c.rgb == colour);
    }
    CHECK(chips == 330);
  }
  SUBCASE("a uniform four-word encoder leaves every cell blank") {
    const auto cells = render_map(NamingSystem(Eigen::MatrixXd::Constant(4, 330, 0.25)), grid);
    for (const MosaicCell& c : cells) {
      CHECK(c.band == Band::none);
      CHECK(c.rgb == Rgb8{255, 255, 255});
    }
  }
  SUBCASE("bands follow the mode map") {
    const NamingSystem sys = sample_rm_system(grid, 6, 44).second;
    const ModeMap modes = mode_map(sys);
    for (const MosaicCell& c : render_map(sys, grid)) {
      if (c.chip < 0) continue;
      CHECK(c.word == modes.word[c.chip]);
      CHECK(c.band == modes.band[c.chip]);
      CHECK(c.row == grid.chip(c.chip).row - 'A');
      CHECK(c.column == grid.chip(c.chip).column);
    }
    std::ostringstream csv, svg;
    write_mosaic_csv(csv, render_map(sys, grid));
    CHECK(csv.str().rfind("row,column,chip,word,max_prob,band,color\n", 0) == 0);
    write_mosaic_svg(svg, render_map(sys, grid), "t");
    CHECK(svg.str().find("<svg") != std::string::npos);
  }
}

TEST_CASE("plots") {
  const IBCurve& curve = testing::shared_frontier();
  std::ostringstream svg;
  PointSeries s{"rm", "#c00", {IBPoint{1.0, 0.8}, IBPoint{2.0, 1.5}}, '+'};
  write_ib_plane_svg(svg, curve, {s}, 5.4);
  CHECK(count_of(svg.str(), "<polyline class=\"frontier\"") == 1);

  std::ostringstream hist, ba;
  write_histogram_svg(hist, {{"a", "#00f", {0.1, 0.2, 0.25}}, {"b", "#f00", {0.5}}}, 0.0, 1.0, 10, "gNID");
  CHECK(hist.str().find("</svg>") != std::string::npos);
  write_before_after_svg(ba, {0.4, 0.5}, {0.3, 0.2}, "gNID");
  CHECK(count_of(ba.str(), "<line") >= 2);
}

TEST_CASE("frontier of the bundled grid") {
  const IBCurve& curve = testing::shared_frontier();
  const ChipGrid grid = default_chip_grid();
  const MeaningModel mm = build_meaning_model(grid);
  CHECK(curve.points.size() + curve.flagged_betas.size() == FrontierOptions{}.betas.size());
  CHECK(curve.betas.back() == 1.0);
  CHECK(curve.points.back().complexity < 1e-3);
  CHECK(curve.points.front().accuracy <= meaning_information(grid, mm) + 1e-9);

  SUBCASE("fixture languages and RM systems sit below it") {
    const auto refs = encoders_of(fixture_languages(grid));
    for (const NamingSystem& s : refs) {
      const IBPoint p = evaluate(s, grid, mm);
      CHECK(p.accuracy <= frontier_accuracy_at(curve, p.complexity) + 1e-3);
    }
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const IBPoint p = evaluate(sample_rm_system(grid, 3 + seed % 8, seed).second, grid, mm);
      CHECK(p.accuracy <= frontier_accuracy_at(curve, p.complexity) + 1e-3);
    }
  }
  SUBCASE("analysis rows") {
    const auto refs = encoders_of(fixture_languages(grid, 8));
    const AnalysisRow row = analyze_system("x", refs[3], grid, mm, curve, refs);
    CHECK(row.num_words == refs[3].num_words());
    CHECK(row.min_gnid < 1e-12);
    CHECK(row.wcs_neighbor == 3);
    CHECK(row.point.epsilon.value() >= 0.0);
    std::ostringstream out;
    write_analysis_csv(out, {row});
    CHECK(out.str().rfind(std::string(kAnalysisHeader) + "\n", 0) == 0);
  }
}

TEST_CASE("frontier cache") {
  const ChipGrid g = testing::three_cluster_grid();
  const MeaningModel mm = build_meaning_model(g, 64.0);
  FrontierOptions opts;
  opts.betas = annealing_beta_schedule(1024.0, 50);
  opts.max_words = 3;
  const fs::path dir = fs::path(NILCOLOR_TEST_CACHE) / "scratch" / "cache";
  fs::remove_all(dir);
  bool hit = true;
  const IBCurve first = cached_ib_frontier(g, mm, opts, dir.string(), &hit);
  CHECK(!hit);
  REQUIRE(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
  const fs::path file = fs::directory_iterator(dir)->path();
  std::ifstream a(file);
  const std::string bytes((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const IBCurve second = cached_ib_frontier(g, mm, opts, dir.string(), &hit);
  CHECK(hit);
  CHECK(second.points.size() == first.points.size());
  std::ifstream b(file);
  CHECK(std::string((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>()) == bytes);

  CHECK(frontier_cache_key(g, mm, opts) != frontier_cache_key(g, build_meaning_model(g, 65.0), opts));
  FrontierOptions other = opts;
  other.betas = annealing_beta_schedule(1024.0, 51);
  CHECK(frontier_cache_key(g, mm, opts) != frontier_cache_key(g, mm, other));
}

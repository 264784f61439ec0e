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

// Figures and tables: IB-plane plots, colour-map mosaics, histograms, and the
// on-disk frontier cache.

#pragma once

#include "color_domain.hpp"
#include "ib.hpp"
#include "naming_system.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nilcolor {

// ---------------------------------------------------------------------------
// Frontier cache

/// Key over everything the frontier depends on.
std::uint64_t frontier_cache_key(const ChipGrid& grid, const MeaningModel& mm, const FrontierOptions& opts);

/// Reads `<dir>/frontier-<key>.csv` when present, otherwise computes the curve
/// and writes it there. `hit` reports which path was taken.
IBCurve cached_ib_frontier(const ChipGrid& grid, const MeaningModel& mm, const FrontierOptions& opts,
                           const std::string& cache_dir, bool* hit = nullptr);

// ---------------------------------------------------------------------------
// Colour conversion (rendering only)

using Rgb8 = std::array<std::uint8_t, 3>;

/// CIELAB (D65 white) to 8-bit sRGB; out-of-gamut channels are clipped.
Rgb8 lab_to_srgb(const Lab& lab);
std::string hex_color(const Rgb8& rgb);

// ---------------------------------------------------------------------------
// Colour-map mosaic

inline constexpr int kMosaicRows = 10;
inline constexpr int kMosaicCols = 41;

struct MosaicCell {
  int row = 0;       // 0 = A
  int column = 0;    // 0 = achromatic
  int chip = -1;     // -1 where the grid has no chip
  int word = -1;
  double max_prob = 0.0;
  Band band = Band::none;
  Rgb8 rgb{255, 255, 255};
};

/// 10 x 41 cells in row-major order. A category is drawn in the mean CIELAB
/// colour of the chips it wins; faded cells are blended halfway to white.
std::vector<MosaicCell> render_map(const NamingSystem& sys, const ChipGrid& grid);
void write_mosaic_csv(std::ostream& out, const std::vector<MosaicCell>& cells);
void write_mosaic_svg(std::ostream& out, const std::vector<MosaicCell>& cells,
                      const std::string& title = {});

// ---------------------------------------------------------------------------
// Plots

struct PointSeries {
  std::string label;
  std::string color;  // any SVG colour
  std::vector<IBPoint> points;
  char marker = 'o';  // 'o' circle, '+' cross, '^' triangle
};

/// Complexity vs accuracy with the frontier as a single polyline.
void write_ib_plane_svg(std::ostream& out, const IBCurve& curve, const std::vector<PointSeries>& series,
                        double info_bound);

struct Histogram {
  std::string label;
  std::string color;
  std::vector<double> values;
};

void write_histogram_svg(std::ostream& out, const std::vector<Histogram>& groups, double lo, double hi,
                         int bins, const std::string& x_label);

/// Paired before/after dot plot (one segment per pair).
void write_before_after_svg(std::ostream& out, const std::vector<double>& before,
                            const std::vector<double>& after, const std::string& y_label);

// ---------------------------------------------------------------------------
// Analysis table

struct AnalysisRow {
  std::string name;
  int num_words = 0;
  IBPoint point;  // epsilon / fitted_beta filled
  double min_gnid = 0.0;
  int wcs_neighbor = -1;
};

inline constexpr const char* kAnalysisHeader = "name,K,complexity,accuracy,epsilon,beta,min_gnid,wcs_neighbor";

AnalysisRow analyze_system(const std::string& name, const NamingSystem& sys, const ChipGrid& grid,
                           const MeaningModel& mm, const IBCurve& curve,
                           const std::vector<NamingSystem>& references);
void write_analysis_csv(std::ostream& out, const std::vector<AnalysisRow>& rows);

}  // namespace nilcolor

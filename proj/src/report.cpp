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

#include "report.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace nilcolor {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

template <class T>
void fnv_value(std::uint64_t& h, T v) {
  fnv_bytes(h, &v, sizeof v);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Plot frame shared by the SVG figures.
struct Frame {
  double width = 640, height = 480;
  double left = 64, right = 24, top = 24, bottom = 56;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void open_svg(std::ostream& out, const Frame& f) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
      << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::ostream& out, const Frame& f, const std::string& xl, const std::string& yl, int xt, int yt) {
  out << "<g stroke=\"black\" fill=\"none\">\n";
  out << "<line x1=\"" << f.px(f.x0) << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << f.px(f.x1) << "\" y2=\""
      << f.py(f.y0) << "\"/>\n";
  out << "<line x1=\"" << f.px(f.x0) << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << f.px(f.x0) << "\" y2=\""
      << f.py(f.y1) << "\"/>\n";
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= xt; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / xt;
    out << "<text x=\"" << fmt("%.2f", f.px(x)) << "\" y=\"" << f.py(f.y0) + 16
        << "\" text-anchor=\"middle\">" << fmt("%.2g", x) << "</text>\n";
  }
  for (int i = 0; i <= yt; ++i) {
    const double y = f.y0 + (f.y1 - f.y0) * i / yt;
    out << "<text x=\"" << f.px(f.x0) - 6 << "\" y=\"" << fmt("%.2f", f.py(y) + 4)
        << "\" text-anchor=\"end\">" << fmt("%.2g", y) << "</text>\n";
  }
  out << "<text x=\"" << (f.left + f.width - f.right) / 2 << "\" y=\"" << f.height - 16
      << "\" text-anchor=\"middle\">" << xml_escape(xl) << "</text>\n";
  out << "<text transform=\"translate(16," << (f.top + f.height - f.bottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(yl) << "</text>\n";
  out << "</g>\n";
}

void marker(std::ostream& out, char kind, double x, double y, const std::string& color) {
  switch (kind) {
    case '+':
      out << "<path d=\"M" << fmt("%.2f", x - 4) << ' ' << fmt("%.2f", y) << "h8M" << fmt("%.2f", x) << ' '
          << fmt("%.2f", y - 4) << "v8\" stroke=\"" << color << "\"/>\n";
      break;
    case '^':
      out << "<path d=\"M" << fmt("%.2f", x) << ' ' << fmt("%.2f", y - 5) << "l4.5 8h-9z\" fill=\"" << color
          << "\"/>\n";
      break;
    default:
      out << "<circle cx=\"" << fmt("%.2f", x) << "\" cy=\"" << fmt("%.2f", y) << "\" r=\"2.5\" fill=\""
          << color << "\" fill-opacity=\"0.7\"/>\n";
  }
}

void legend(std::ostream& out, const Frame& f, const std::vector<std::pair<std::string, std::string>>& items) {
  double y = f.top + 14;
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const auto& [label, color] : items) {
    out << "<rect x=\"" << f.width - f.right - 130 << "\" y=\"" << y - 9 << "\" width=\"10\" height=\"10\" fill=\""
        << color << "\"/>\n";
    out << "<text x=\"" << f.width - f.right - 115 << "\" y=\"" << y << "\">" << xml_escape(label)
        << "</text>\n";
    y += 15;
  }
  out << "</g>\n";
}

double srgb_gamma(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

}  // namespace

// Bumped whenever the solver's output changes, so stale cache files miss.
constexpr std::uint32_t kSolverRevision = 2;

std::uint64_t frontier_cache_key(const ChipGrid& grid, const MeaningModel& mm, const FrontierOptions& opts) {
  std::uint64_t h = kFnvOffset;
  fnv_value(h, kSolverRevision);
  fnv_value(h, grid.hash());
  fnv_value(h, mm.sigma_sq());
  fnv_value(h, opts.betas.size());
  for (double b : opts.betas) fnv_value(h, b);
  fnv_value(h, opts.max_words);
  fnv_value(h, opts.tolerance);
  fnv_value(h, opts.max_sweeps);
  fnv_value(h, opts.merge_tolerance);
  return h;
}

IBCurve cached_ib_frontier(const ChipGrid& grid, const MeaningModel& mm, const FrontierOptions& opts,
                           const std::string& cache_dir, bool* hit) {
  char name[64];
  std::snprintf(name, sizeof name, "frontier-%016llx.csv",
                static_cast<unsigned long long>(frontier_cache_key(grid, mm, opts)));
  const std::filesystem::path path = std::filesystem::path(cache_dir) / name;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    try {
      IBCurve curve = read_curve_csv(in);
      if (!curve.points.empty()) {
        if (hit) *hit = true;
        return curve;
      }
    } catch (const Error&) {
      // Unreadable cache entry: fall through and rebuild it.
    }
  }
  if (hit) *hit = false;
  IBCurve curve = ib_frontier(grid, mm, opts);
  std::filesystem::create_directories(cache_dir);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) fail(ErrorKind::io, "cannot write frontier cache in " + cache_dir);
    write_curve_csv(out, curve);
  }
  std::filesystem::rename(tmp, path);
  return curve;
}

Rgb8 lab_to_srgb(const Lab& lab) {
  constexpr double xn = 0.95047, yn = 1.0, zn = 1.08883;
  constexpr double delta = 6.0 / 29.0;
  auto finv = [](double t) { return t > delta ? t * t * t : 3.0 * delta * delta * (t - 4.0 / 29.0); };
  const double fy = (lab[0] + 16.0) / 116.0;
  const double x = xn * finv(fy + lab[1] / 500.0);
  const double y = yn * finv(fy);
  const double z = zn * finv(fy - lab[2] / 200.0);
  const double lin[3] = {3.2404542 * x - 1.5371385 * y - 0.4985314 * z,
                         -0.9692660 * x + 1.8760108 * y + 0.0415560 * z,
                         0.0556434 * x - 0.2040259 * y + 1.0572252 * z};
  Rgb8 out{};
  for (int i = 0; i < 3; ++i) {
    const double c = std::clamp(srgb_gamma(std::clamp(lin[i], 0.0, 1.0)), 0.0, 1.0);
    out[i] = static_cast<std::uint8_t>(std::lround(c * 255.0));
  }
  return out;
}

std::string hex_color(const Rgb8& rgb) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::vector<MosaicCell> render_map(const NamingSystem& sys, const ChipGrid& grid) {
  if (sys.num_chips() != grid.size()) fail(ErrorKind::validation, "system does not match grid");
  const ModeMap modes = mode_map(sys);
  std::vector<Lab> mean(static_cast<std::size_t>(sys.num_words()), Lab{0, 0, 0});
  std::vector<int> count(static_cast<std::size_t>(sys.num_words()), 0);
  for (int c = 0; c < grid.size(); ++c) {
    const int w = modes.word[c];
    for (int k = 0; k < 3; ++k) mean[w][k] += grid.chip(c).lab[k];
    ++count[w];
  }
  std::vector<Rgb8> color(mean.size());
  for (std::size_t w = 0; w < mean.size(); ++w) {
    if (count[w] == 0) continue;
    for (int k = 0; k < 3; ++k) mean[w][k] /= count[w];
    color[w] = lab_to_srgb(mean[w]);
  }

  std::vector<MosaicCell> cells(kMosaicRows * kMosaicCols);
  for (int r = 0; r < kMosaicRows; ++r) {
    for (int col = 0; col < kMosaicCols; ++col) {
      MosaicCell& cell = cells[r * kMosaicCols + col];
      cell.row = r;
      cell.column = col;
    }
  }
  for (int c = 0; c < grid.size(); ++c) {
    const Chip& chip = grid.chip(c);
    const int r = chip.row - 'A';
    if (r < 0 || r >= kMosaicRows || chip.column < 0 || chip.column >= kMosaicCols) continue;
    MosaicCell& cell = cells[r * kMosaicCols + chip.column];
    cell.chip = c;
    cell.word = modes.word[c];
    cell.max_prob = modes.max_prob[c];
    cell.band = modes.band[c];
    const Rgb8& base = color[cell.word];
    switch (cell.band) {
      case Band::strong:
        cell.rgb = base;
        break;
      case Band::faded:
        for (int k = 0; k < 3; ++k) cell.rgb[k] = static_cast<std::uint8_t>((base[k] + 255 + 1) / 2);
        break;
      case Band::none:
        cell.rgb = {255, 255, 255};
        break;
    }
  }
  return cells;
}

void write_mosaic_csv(std::ostream& out, const std::vector<MosaicCell>& cells) {
  out << "row,column,chip,word,max_prob,band,color\n";
  for (const MosaicCell& c : cells) {
    if (c.chip < 0) continue;
    const char* band = c.band == Band::strong ? "strong" : c.band == Band::faded ? "faded" : "none";
    out << static_cast<char>('A' + c.row) << ',' << c.column << ',' << c.chip << ',' << c.word << ','
        << fmt("%.6f", c.max_prob) << ',' << band << ',' << hex_color(c.rgb) << '\n';
  }
}

void write_mosaic_svg(std::ostream& out, const std::vector<MosaicCell>& cells, const std::string& title) {
  constexpr int cell = 14;
  constexpr int left = 20, top = 24;
  const int width = left + kMosaicCols * cell + 8;
  const int height = top + kMosaicRows * cell + 8;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"" << left << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(title) << "</text>\n";
  }
  out << "<g font-family=\"sans-serif\" font-size=\"9\">\n";
  for (int r = 0; r < kMosaicRows; ++r) {
    out << "<text x=\"4\" y=\"" << top + r * cell + 10 << "\">" << static_cast<char>('A' + r) << "</text>\n";
  }
  out << "</g>\n<g stroke=\"#dddddd\" stroke-width=\"0.5\">\n";
  for (const MosaicCell& c : cells) {
    if (c.chip < 0) continue;
    out << "<rect x=\"" << left + c.column * cell << "\" y=\"" << top + c.row * cell << "\" width=\"" << cell
        << "\" height=\"" << cell << "\" fill=\"" << hex_color(c.rgb) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_ib_plane_svg(std::ostream& out, const IBCurve& curve, const std::vector<PointSeries>& series,
                        double info_bound) {
  Frame f;
  double xmax = 0.0;
  for (const PointSeries& s : series) {
    for (const IBPoint& p : s.points) xmax = std::max(xmax, p.complexity);
  }
  xmax = std::max(1.0, std::ceil(xmax * 1.15 * 2.0) / 2.0);
  f.x1 = xmax;
  f.y1 = std::ceil(info_bound * 2.0) / 2.0;
  open_svg(out, f);
  axes(out, f, "Complexity, I(C;W) bits", "Accuracy, I(W;U) bits", 6, 5);
  out << "<line x1=\"" << f.px(0) << "\" y1=\"" << fmt("%.2f", f.py(info_bound)) << "\" x2=\"" << f.px(f.x1)
      << "\" y2=\"" << fmt("%.2f", f.py(info_bound)) << "\" stroke=\"#999999\" stroke-dasharray=\"2 3\"/>\n";

  // Frontier: one polyline, clipped at the right edge of the frame.
  std::vector<IBPoint> pts(curve.points.begin(), curve.points.end());
  std::sort(pts.begin(), pts.end(), [](const IBPoint& a, const IBPoint& b) { return a.complexity < b.complexity; });
  out << "<polyline class=\"frontier\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"6 4\" points=\""
      << f.px(0) << ',' << f.py(0);
  for (const IBPoint& p : pts) {
    if (p.complexity > f.x1) {
      out << ' ' << fmt("%.2f", f.px(f.x1)) << ',' << fmt("%.2f", f.py(frontier_accuracy_at(curve, f.x1)));
      break;
    }
    out << ' ' << fmt("%.2f", f.px(p.complexity)) << ',' << fmt("%.2f", f.py(p.accuracy));
  }
  out << "\"/>\n";

  std::vector<std::pair<std::string, std::string>> items;
  for (const PointSeries& s : series) {
    out << "<g class=\"series\">\n";
    for (const IBPoint& p : s.points) marker(out, s.marker, f.px(p.complexity), f.py(p.accuracy), s.color);
    out << "</g>\n";
    items.emplace_back(s.label, s.color);
  }
  legend(out, f, items);
  out << "</svg>\n";
}

void write_histogram_svg(std::ostream& out, const std::vector<Histogram>& groups, double lo, double hi,
                         int bins, const std::string& x_label) {
  if (bins < 1 || !(hi > lo)) fail(ErrorKind::validation, "histogram needs bins >= 1 and hi > lo");
  std::vector<std::vector<double>> density;
  double ymax = 0.0;
  const double width = (hi - lo) / bins;
  for (const Histogram& g : groups) {
    std::vector<double> d(static_cast<std::size_t>(bins), 0.0);
    for (double v : g.values) {
      if (!std::isfinite(v)) continue;
      const int b = std::clamp(static_cast<int>((v - lo) / width), 0, bins - 1);
      d[b] += 1.0;
    }
    const double n = std::max<double>(1.0, static_cast<double>(g.values.size()));
    for (double& x : d) {
      x /= n * width;
      ymax = std::max(ymax, x);
    }
    density.push_back(std::move(d));
  }
  Frame f;
  f.x0 = lo;
  f.x1 = hi;
  f.y1 = ymax > 0 ? ymax * 1.1 : 1.0;
  open_svg(out, f);
  axes(out, f, x_label, "Density", 5, 4);
  std::vector<std::pair<std::string, std::string>> items;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    out << "<g fill=\"" << groups[g].color << "\" fill-opacity=\"0.45\">\n";
    for (int b = 0; b < bins; ++b) {
      if (density[g][b] == 0.0) continue;
      const double x = f.px(lo + b * width);
      const double y = f.py(density[g][b]);
      out << "<rect x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", y) << "\" width=\""
          << fmt("%.2f", f.px(lo + (b + 1) * width) - x) << "\" height=\"" << fmt("%.2f", f.py(0) - y)
          << "\"/>\n";
    }
    out << "</g>\n";
    items.emplace_back(groups[g].label, groups[g].color);
  }
  legend(out, f, items);
  out << "</svg>\n";
}

void write_before_after_svg(std::ostream& out, const std::vector<double>& before,
                            const std::vector<double>& after, const std::string& y_label) {
  if (before.size() != after.size()) fail(ErrorKind::validation, "before/after sizes differ");
  Frame f;
  f.x0 = -0.5;
  f.x1 = 1.5;
  double ymax = 0.0;
  for (double v : before) ymax = std::max(ymax, v);
  for (double v : after) ymax = std::max(ymax, v);
  f.y1 = ymax > 0 ? std::ceil(ymax * 11.0) / 10.0 : 1.0;
  open_svg(out, f);
  axes(out, f, "before (0) / after (1)", y_label, 4, 5);
  out << "<g stroke=\"#4477aa\" stroke-opacity=\"0.5\">\n";
  for (std::size_t i = 0; i < before.size(); ++i) {
    out << "<line x1=\"" << f.px(0) << "\" y1=\"" << fmt("%.2f", f.py(before[i])) << "\" x2=\"" << f.px(1)
        << "\" y2=\"" << fmt("%.2f", f.py(after[i])) << "\"/>\n";
  }
  out << "</g>\n";
  for (std::size_t i = 0; i < before.size(); ++i) {
    marker(out, 'o', f.px(0), f.py(before[i]), "#4477aa");
    marker(out, 'o', f.px(1), f.py(after[i]), "#cc6677");
  }
  out << "</svg>\n";
}

AnalysisRow analyze_system(const std::string& name, const NamingSystem& sys, const ChipGrid& grid,
                           const MeaningModel& mm, const IBCurve& curve,
                           const std::vector<NamingSystem>& references) {
  AnalysisRow row;
  row.name = name;
  row.num_words = sys.num_words();
  row.point = evaluate(sys, grid, mm);
  const EpsilonFit fit = inefficiency_epsilon(row.point, curve);
  row.point.epsilon = fit.epsilon;
  row.point.fitted_beta = fit.beta;
  if (!references.empty()) {
    std::tie(row.min_gnid, row.wcs_neighbor) = min_gnid_to_set(sys, references, grid);
  } else {
    row.min_gnid = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

void write_analysis_csv(std::ostream& out, const std::vector<AnalysisRow>& rows) {
  out << kAnalysisHeader << '\n';
  char buf[256];
  for (const AnalysisRow& r : rows) {
    std::snprintf(buf, sizeof buf, ",%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.num_words, r.point.complexity,
                  r.point.accuracy, r.point.epsilon.value_or(0.0), r.point.fitted_beta.value_or(0.0),
                  r.min_gnid, r.wcs_neighbor);
    out << r.name << buf;
  }
}

}  // namespace nilcolor

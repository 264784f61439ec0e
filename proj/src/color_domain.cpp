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

#include "color_domain.hpp"

#include "error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace nilcolor {

namespace {

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

// Header lines start with a non-numeric token.
bool looks_like_header(const std::string& line) {
  std::istringstream in(line);
  std::string first;
  in >> first;
  char* end = nullptr;
  std::strtod(first.c_str(), &end);
  return end == first.c_str();
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Eigen::VectorXd read_prior(std::istream& in, int n, bool renormalize) {
  Eigen::VectorXd prior = Eigen::VectorXd::Constant(n, -1.0);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    if (line_no == 1 && looks_like_header(line)) continue;
    std::istringstream fields(line);
    int index = -1;
    double p = 0.0;
    if (!(fields >> index >> p)) {
      fail(ErrorKind::format, "prior: malformed line " + std::to_string(line_no));
    }
    if (index < 0 || index >= n) {
      fail(ErrorKind::format, "prior: chip index out of range at line " + std::to_string(line_no));
    }
    if (prior[index] >= 0.0) {
      fail(ErrorKind::format, "prior: duplicate chip index " + std::to_string(index));
    }
    if (!std::isfinite(p) || p < 0.0) {
      fail(ErrorKind::validation, "prior: negative or non-finite probability for chip " +
                                      std::to_string(index));
    }
    prior[index] = p;
  }
  for (int i = 0; i < n; ++i) {
    if (prior[i] < 0.0) fail(ErrorKind::format, "prior: missing chip index " + std::to_string(i));
  }
  const double total = prior.sum();
  if (std::abs(total - 1.0) > 1e-6) {
    if (!renormalize || total <= 0.0) {
      fail(ErrorKind::validation, "prior sums to " + std::to_string(total) + ", expected 1");
    }
  }
  // Renormalizing keeps the 1e-9 invariant for inputs rounded to 1e-6; priors
  // already normalized to rounding error are kept bit-for-bit.
  if (std::abs(total - 1.0) > 1e-12) prior /= total;
  return prior;
}

}  // namespace

ChipGrid::ChipGrid(std::vector<Chip> chips, Eigen::VectorXd prior)
    : chips_(std::move(chips)), prior_(std::move(prior)) {
  if (prior_.size() != static_cast<Eigen::Index>(chips_.size())) {
    fail(ErrorKind::validation, "prior length does not match chip count");
  }
  if ((prior_.array() < 0.0).any() || std::abs(prior_.sum() - 1.0) > 1e-9) {
    fail(ErrorKind::validation, "prior is not a probability distribution");
  }
}

std::uint64_t ChipGrid::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[160];
  for (const Chip& c : chips_) {
    std::snprintf(buf, sizeof buf, "%d %c %d %.17g %.17g %.17g %.17g\n", c.index, c.row, c.column,
                  c.lab[0], c.lab[1], c.lab[2], prior_[c.index]);
    h = fnv1a(buf, h);
  }
  return h;
}

ChipGrid load_chip_grid(std::istream& coord_table, std::istream* prior_source,
                        const GridLoadOptions& opts) {
  const int n = opts.expected_chips;
  std::vector<Chip> chips(static_cast<std::size_t>(n));
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int count = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(coord_table, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    if (line_no == 1 && looks_like_header(line)) continue;
    std::istringstream fields(line);
    Chip chip;
    std::string row;
    if (!(fields >> chip.index >> row >> chip.column >> chip.lab[0] >> chip.lab[1] >> chip.lab[2])) {
      fail(ErrorKind::format, "chip table: malformed line " + std::to_string(line_no));
    }
    if (row.size() != 1 || row[0] < 'A' || row[0] > 'J') {
      fail(ErrorKind::format, "chip table: bad row letter '" + row + "' at line " +
                                  std::to_string(line_no));
    }
    chip.row = row[0];
    if (chip.column < 0 || chip.column > 40) {
      fail(ErrorKind::format, "chip table: column out of range at line " + std::to_string(line_no));
    }
    for (double v : chip.lab) {
      if (!std::isfinite(v)) {
        fail(ErrorKind::format, "chip table: non-finite coordinate at line " + std::to_string(line_no));
      }
    }
    if (chip.lab[0] < 0.0 || chip.lab[0] > 100.0) {
      fail(ErrorKind::format, "chip table: L* outside [0,100] at line " + std::to_string(line_no));
    }
    if (chip.index < 0 || chip.index >= n) {
      fail(ErrorKind::format, "chip table: index " + std::to_string(chip.index) + " out of range");
    }
    if (seen[chip.index]) {
      fail(ErrorKind::format, "chip table: duplicate index " + std::to_string(chip.index));
    }
    seen[chip.index] = true;
    chips[chip.index] = chip;
    ++count;
  }
  if (count != n) {
    fail(ErrorKind::format, "chip table: expected " + std::to_string(n) + " chips, found " +
                                std::to_string(count));
  }
  Eigen::VectorXd prior = prior_source ? read_prior(*prior_source, n, opts.renormalize_prior)
                                       : Eigen::VectorXd::Constant(n, 1.0 / n);
  return ChipGrid(std::move(chips), std::move(prior));
}

ChipGrid load_chip_grid_files(const std::string& coord_path,
                              const std::optional<std::string>& prior_path,
                              const GridLoadOptions& opts) {
  std::ifstream coords(coord_path);
  if (!coords) fail(ErrorKind::io, "cannot open chip table " + coord_path);
  if (!prior_path) return load_chip_grid(coords, nullptr, opts);
  std::ifstream prior(*prior_path);
  if (!prior) fail(ErrorKind::io, "cannot open prior " + *prior_path);
  return load_chip_grid(coords, &prior, opts);
}

ChipGrid default_chip_grid() {
  std::istringstream table(bundled_chip_table());
  return load_chip_grid(table);
}

double perceptual_distance_sq(const Lab& a, const Lab& b) noexcept {
  const double dl = a[0] - b[0];
  const double da = a[1] - b[1];
  const double db = a[2] - b[2];
  return dl * dl + da * da + db * db;
}

double perceptual_distance_sq(const Chip& a, const Chip& b) noexcept {
  return perceptual_distance_sq(a.lab, b.lab);
}

MeaningModel build_meaning_model(const ChipGrid& grid, double sigma_sq) {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
    fail(ErrorKind::validation, "sigma_sq must be positive");
  }
  const int n = grid.size();
  Eigen::MatrixXd m(n, n);
  for (int c = 0; c < n; ++c) {
    // Exponent is <= 0 with the diagonal at exactly 0, so no shift is needed
    // and the row maximum stays at u = c.
    for (int u = 0; u < n; ++u) {
      m(c, u) = std::exp(-perceptual_distance_sq(grid.chip(c), grid.chip(u)) / (2.0 * sigma_sq));
    }
    m.row(c) /= m.row(c).sum();
  }
  return MeaningModel(sigma_sq, std::move(m));
}

}  // namespace nilcolor

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

// Stimulus space: the 330-chip naming grid, CIELAB geometry, the prior over
// chips and the Gaussian meaning model consumed by the IB analysis.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nilcolor {

inline constexpr int kNumChips = 330;

using Lab = std::array<double, 3>;

struct Chip {
  int index = 0;
  char row = 'A';  // A-J
  int column = 0;  // 0 = achromatic, 1..40 hue columns
  Lab lab{};
};

/// Immutable after construction. `prior` is indexed by chip index.
class ChipGrid {
 public:
  ChipGrid(std::vector<Chip> chips, Eigen::VectorXd prior);

  const std::vector<Chip>& chips() const noexcept { return chips_; }
  const Chip& chip(int index) const { return chips_.at(static_cast<std::size_t>(index)); }
  const Eigen::VectorXd& prior() const noexcept { return prior_; }
  int size() const noexcept { return static_cast<int>(chips_.size()); }

  /// Stable content hash (FNV-1a over the canonical text form), used as a
  /// cache key for derived artifacts such as the frontier.
  std::uint64_t hash() const;

 private:
  std::vector<Chip> chips_;
  Eigen::VectorXd prior_;
};

struct GridLoadOptions {
  bool renormalize_prior = false;
  // Chip count the table must contain. Only tests use anything but 330.
  int expected_chips = kNumChips;
};

/// Parses the chip table (`index row col L a b`, tab-separated, optional
/// header) and an optional prior (`index p`). Absent prior means uniform.
ChipGrid load_chip_grid(std::istream& coord_table, std::istream* prior_source = nullptr,
                        const GridLoadOptions& opts = {});

ChipGrid load_chip_grid_files(const std::string& coord_path,
                              const std::optional<std::string>& prior_path = std::nullopt,
                              const GridLoadOptions& opts = {});

/// The bundled Munsell grid compiled into the library, uniform prior.
ChipGrid default_chip_grid();
const char* bundled_chip_table();

double perceptual_distance_sq(const Chip& a, const Chip& b) noexcept;
double perceptual_distance_sq(const Lab& a, const Lab& b) noexcept;

/// m_c(u), row c is the distribution over meanings u for chip c.
class MeaningModel {
 public:
  MeaningModel(double sigma_sq, Eigen::MatrixXd likelihood)
      : sigma_sq_(sigma_sq), likelihood_(std::move(likelihood)) {}

  double sigma_sq() const noexcept { return sigma_sq_; }
  const Eigen::MatrixXd& likelihood() const noexcept { return likelihood_; }
  int size() const noexcept { return static_cast<int>(likelihood_.rows()); }

 private:
  double sigma_sq_;
  Eigen::MatrixXd likelihood_;
};

inline constexpr double kDefaultSigmaSq = 64.0;

MeaningModel build_meaning_model(const ChipGrid& grid, double sigma_sq = kDefaultSigmaSq);

}  // namespace nilcolor

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

// Random Gaussian-kernel naming systems: each word w has a prototype chip x_w
// and q(w|c) is proportional to exp(-eta * |x_c - x_w|^2).

#pragma once

#include "color_domain.hpp"
#include "ib.hpp"
#include "naming_system.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nilcolor {

inline constexpr double kEtaLow = 0.001;
inline constexpr double kEtaHigh = 0.005;

struct RMParams {
  int num_words = 0;
  double eta = 0.0;
  std::vector<int> prototypes;  // distinct chip indices, one per word
};

/// The kernel encoder for explicit parameters.
NamingSystem kernel_system(const ChipGrid& grid, const RMParams& params);

/// eta ~ U[0.001, 0.005], prototypes drawn without replacement from the grid.
std::pair<RMParams, NamingSystem> sample_rm_system(const ChipGrid& grid, int num_words,
                                                   std::uint64_t rng_seed);

enum class RMLabel { similar, dissimilar };  // RM_s / RM_d

struct RMEntry {
  std::uint64_t seed = 0;  // regenerates the system via sample_rm_system
  RMParams params;
  NamingSystem system;
  IBPoint point;
  double min_gnid = 0.0;
  int wcs_neighbor = -1;
  RMLabel label = RMLabel::similar;
};

struct RMBatch {
  std::vector<RMEntry> systems;
  double threshold = 0.29;
};

struct RMBatchConfig {
  int per_k = 100;
  int k_min = 3;
  int k_max = 10;
  double complexity_low = 0.84;
  double complexity_high = 2.65;
  double threshold = 0.29;
  std::uint64_t seed = 0;
  // Consecutive out-of-range draws tolerated before giving up.
  int max_consecutive_rejections = 5000;
  int threads = 1;
};

/// Rejection-samples `per_k` in-range systems for every K and labels each by
/// its minimum gNID to the reference (WCS) systems.
RMBatch generate_rm_batch(const ChipGrid& grid, const MeaningModel& mm, const IBCurve& curve,
                          std::span<const NamingSystem> wcs, const RMBatchConfig& cfg);

/// Re-labels a batch at another threshold without recomputing anything.
void relabel(RMBatch& batch, double threshold);

double dissimilar_fraction(const RMBatch& batch);

/// CSV `K,seed,eta,prototypes,complexity,accuracy,epsilon,min_gnid,label`,
/// prototypes joined with ';'.
void write_rm_manifest(std::ostream& out, const RMBatch& batch);
/// Reads a manifest and regenerates each system from its seed.
RMBatch read_rm_manifest(std::istream& in, const ChipGrid& grid);

}  // namespace nilcolor

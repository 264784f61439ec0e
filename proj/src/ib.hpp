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

// Information Bottleneck quantities for color naming systems. All values are
// in bits.

#pragma once

#include "color_domain.hpp"
#include "naming_system.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nilcolor {

struct IBPoint {
  double complexity = 0.0;
  double accuracy = 0.0;
  std::optional<double> epsilon;
  std::optional<double> fitted_beta;
};

/// I(X;Y) of a joint distribution. Rejects negative entries and joints that
/// do not sum to 1 within 1e-9. Result is clamped at 0.
double mutual_information(const Eigen::MatrixXd& joint);

/// I(C;W) under the grid prior.
double complexity(const NamingSystem& sys, const ChipGrid& grid);

/// I(W;U) through the Bayesian listener over the meaning model.
double accuracy(const NamingSystem& sys, const ChipGrid& grid, const MeaningModel& mm);

IBPoint evaluate(const NamingSystem& sys, const ChipGrid& grid, const MeaningModel& mm);

/// I(C;U) of the meaning channel: the ceiling on any system's accuracy.
double meaning_information(const ChipGrid& grid, const MeaningModel& mm);

// ---------------------------------------------------------------------------
// Frontier

/// Geometric descent from `high` to `low` inclusive.
std::vector<double> geometric_beta_schedule(double high = 8192.0, double low = 1.0, int steps = 1500);

/// Descent from `high` to 1 with beta - 1 geometric between high - 1 and
/// `min_offset`, followed by beta = 1 itself. Spends most steps near beta = 1,
/// where the frontier covers the complexities of natural systems.
std::vector<double> annealing_beta_schedule(double high = 8192.0, int steps = 1500,
                                            double min_offset = 1e-3);

struct FrontierOptions {
  std::vector<double> betas = annealing_beta_schedule();
  int max_words = kNumChips;
  double tolerance = 1e-6;  // on the IB objective between sweeps
  int max_sweeps = 5000;    // per beta
  bool keep_encoders = false;
  // Words whose decoders differ by less than this (max abs) are merged.
  double merge_tolerance = 1e-5;
};

struct IBCurve {
  std::vector<double> betas;      // converged betas only, descending
  std::vector<IBPoint> points;    // parallel to betas
  std::vector<NamingSystem> encoders;  // parallel to betas when kept
  std::vector<double> flagged_betas;   // hit the sweep cap, excluded
};

IBCurve ib_frontier(const ChipGrid& grid, const MeaningModel& mm, const FrontierOptions& opts = {});

/// Best frontier accuracy at the given complexity: piecewise-linear over the
/// curve points sorted by complexity, anchored at (0,0) and flat past the
/// last point.
double frontier_accuracy_at(const IBCurve& curve, double complexity);

/// CSV `beta,complexity,accuracy`, one row per converged point.
void write_curve_csv(std::ostream& out, const IBCurve& curve);
IBCurve read_curve_csv(std::istream& in);

enum class EpsilonMode {
  objective_gap,  // min over beta of (F_beta[sys] - F_beta[q*_beta]) / beta
  vertical_gap,   // frontier accuracy at the same complexity minus accuracy
};

struct EpsilonFit {
  double epsilon = 0.0;
  double beta = 0.0;  // minimizing beta; 0 in vertical mode
};

EpsilonFit inefficiency_epsilon(const IBPoint& point, const IBCurve& curve,
                                EpsilonMode mode = EpsilonMode::objective_gap);
EpsilonFit inefficiency_epsilon(const NamingSystem& sys, const IBCurve& curve, const ChipGrid& grid,
                                const MeaningModel& mm, EpsilonMode mode = EpsilonMode::objective_gap);

// ---------------------------------------------------------------------------
// Similarity

/// Generalized normalized information distance. Two constant systems are at
/// distance 0.
double gnid(const NamingSystem& a, const NamingSystem& b, const ChipGrid& grid);

/// (min gNID, index of the closest reference); ties go to the lowest index.
std::pair<double, int> min_gnid_to_set(const NamingSystem& sys, std::span<const NamingSystem> refs,
                                       const ChipGrid& grid);

enum class Band { strong, faded, none };  // [0.75,1], [0.3,0.75), below 0.3

struct ModeMap {
  std::vector<int> word;         // argmax_w q(w|c), lowest index on ties
  std::vector<double> max_prob;  // q(word|c)
  std::vector<Band> band;
};

Band band_of(double probability) noexcept;
ModeMap mode_map(const NamingSystem& sys);

}  // namespace nilcolor

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

// Neural iterated learning: generations of speaker/listener networks that
// learn from their predecessor's naming data (learning phase), play the
// color signaling game (interaction phase) and hand a fresh dataset to the
// next generation (transmission phase).

#pragma once

#include "agents.hpp"
#include "color_domain.hpp"
#include "ib.hpp"
#include "naming_system.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nilcolor {

enum class Variant {
  il_c,  // full loop
  il,    // no signaling game: imitation and transmission only
  c,     // a single generation, no transmission
};

const char* variant_name(Variant v) noexcept;  // "IL+C", "IL", "C"
Variant parse_variant(const std::string& s);

struct GameConfig {
  int num_words = 3;
  Variant variant = Variant::il_c;
  double reward_sigma_sq = 500.0;
  int steps_per_phase = 1000;
  int listener_steps = 1000;  // listener-only rounds of the learning phase
  int batch = 50;
  double learning_rate = 0.005;
  int hidden = kDefaultHidden;
  double input_scale = 0.1;  // CIELAB / 10
  bool reinforce_baseline = true;
  int dataset_size = 300;
  bool argmax_transmission = false;
  bool transmission_with_replacement = false;
  int max_generations = 200;
  int convergence_window = 10;
  double convergence_tolerance = 0.1;  // bits
};

void validate(const GameConfig& cfg);

/// D_t: (chip, word) pairs; Sample::input_id is the chip index.
struct TransmissionDataset {
  std::vector<Sample> pairs;
};

/// exp(-|x_c - x_chat|^2 / (2 sigma_sq))
double reward(const ChipGrid& grid, int chip, int guess, double sigma_sq);

/// Chips drawn from the prior; without replacement unless asked.
std::vector<int> sample_chips(const ChipGrid& grid, int count, Rng& rng, bool with_replacement = false);

enum class InitMode { uniform_random, from_system };

TransmissionDataset init_dataset(const ChipGrid& grid, int num_words, InitMode mode, int size, Rng& rng,
                                 const NamingSystem* source = nullptr, bool with_replacement = false);

/// The speaker's full encoder over the grid.
NamingSystem speaker_system(const AgentParams& speaker, const ChipGrid& grid,
                            double input_scale = kDefaultInputScale);

struct UpdateFlags {
  bool speaker = false;
  bool listener = false;
};

struct Dyad {
  AgentParams speaker;
  AgentParams listener;
  OptimizerState speaker_opt;
  OptimizerState listener_opt;
};

Dyad make_dyad(int num_words, int num_chips, Rng& rng, const GameConfig& cfg);

/// Fixed per-grid lookup tables shared by all rounds of a chain.
struct GameTables {
  std::vector<Eigen::VectorXd> speaker_inputs;   // scaled CIELAB per chip
  std::vector<Eigen::VectorXd> listener_inputs;  // one-hot per word
  Eigen::MatrixXd rewards;                        // chip x guess
  GameTables(const ChipGrid& grid, const GameConfig& cfg);
};

struct RoundResult {
  std::vector<Episode> speaker_episodes;   // input chip, action word
  std::vector<Episode> listener_episodes;  // input word, action chip
  double mean_reward = 0.0;
};

/// One batch of the signaling game followed by REINFORCE updates of the
/// flagged agents (both receive the same reward).
RoundResult play_signaling_round(Dyad& dyad, const ChipGrid& grid, const GameTables& tables,
                                 const GameConfig& cfg, Rng& rng, UpdateFlags flags);

struct GenerationRecord {
  int generation = 0;
  IBPoint point;
  double mean_reward = 0.0;  // NaN when no game was played
};

struct RunRecord {
  std::vector<GenerationRecord> trajectory;
  NamingSystem final_system;
  bool converged = false;
  int generations = 0;
};

/// True when the last `window` generations span < `tolerance` bits in both
/// complexity and accuracy.
bool stopping_rule(std::span<const GenerationRecord> trajectory, int window, double tolerance);

RunRecord run_nil_chain(const ChipGrid& grid, const MeaningModel& mm, const GameConfig& cfg,
                        const TransmissionDataset& init, std::uint64_t rng_seed);

/// CSV `generation,complexity,accuracy,mean_reward`.
void write_trajectory_csv(std::ostream& out, const RunRecord& record);

// ---------------------------------------------------------------------------
// Experiment driver

struct ExperimentRow {
  Variant variant = Variant::il_c;
  int num_words = 0;
  int seed = 0;
  int generations = 0;
  bool converged = false;
  double complexity = 0.0;
  double accuracy = 0.0;
  double epsilon = 0.0;
  double min_gnid = 0.0;
  int wcs_neighbor = -1;
};

inline constexpr const char* kExperimentHeader =
    "variant,K,seed,generations,converged,complexity,accuracy,epsilon,min_gnid,wcs_neighbor";

struct ExperimentCell {
  Variant variant = Variant::il_c;
  int num_words = 3;
};

struct ExperimentSpec {
  std::vector<ExperimentCell> cells;
  int seeds_per_cell = 1;
  std::uint64_t rng_seed = 0;
  GameConfig base;  // num_words/variant come from each cell
  // When set, seed i of every cell starts from a dataset sampled from
  // init_systems[i] and K is taken from that system.
  std::vector<NamingSystem> init_systems;
  std::optional<std::string> table_path;      // resumable output
  std::optional<std::string> trajectory_dir;  // per-chain trajectory CSVs
  int threads = 1;
};

/// Runs every (cell, seed) chain not already present in the table and
/// returns the full table sorted by (variant, K, seed).
std::vector<ExperimentRow> run_experiment(const ChipGrid& grid, const MeaningModel& mm,
                                          const IBCurve& curve, std::span<const NamingSystem> wcs,
                                          const ExperimentSpec& spec);

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_experiment_csv(std::istream& in);

}  // namespace nilcolor

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

#include "nil.hpp"

#include "error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace nilcolor {

const char* variant_name(Variant v) noexcept {
  switch (v) {
    case Variant::il_c: return "IL+C";
    case Variant::il: return "IL";
    case Variant::c: return "C";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "IL+C" || s == "il+c" || s == "ilc") return Variant::il_c;
  if (s == "IL" || s == "il") return Variant::il;
  if (s == "C" || s == "c") return Variant::c;
  fail(ErrorKind::validation, "unknown variant '" + s + "' (expected IL+C, IL or C)");
}

void validate(const GameConfig& cfg) {
  if (cfg.num_words < 1) fail(ErrorKind::validation, "K must be >= 1");
  if (!(cfg.reward_sigma_sq > 0.0)) fail(ErrorKind::validation, "reward sigma_sq must be positive");
  if (cfg.steps_per_phase < 1 || cfg.listener_steps < 0) fail(ErrorKind::validation, "steps must be >= 1");
  if (cfg.batch < 1) fail(ErrorKind::validation, "batch must be >= 1");
  if (!(cfg.learning_rate > 0.0)) fail(ErrorKind::validation, "learning rate must be positive");
  if (cfg.dataset_size < 1) fail(ErrorKind::validation, "dataset size must be >= 1");
  if (cfg.max_generations < 1) fail(ErrorKind::validation, "generation cap must be >= 1");
  if (cfg.convergence_window < 1) fail(ErrorKind::validation, "convergence window must be >= 1");
}

double reward(const ChipGrid& grid, int chip, int guess, double sigma_sq) {
  return std::exp(-perceptual_distance_sq(grid.chip(chip), grid.chip(guess)) / (2.0 * sigma_sq));
}

std::vector<int> sample_chips(const ChipGrid& grid, int count, Rng& rng, bool with_replacement) {
  const Eigen::VectorXd& prior = grid.prior();
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count));
  if (with_replacement) {
    for (int i = 0; i < count; ++i) out.push_back(sample_index(prior, rng));
    return out;
  }
  const int support = static_cast<int>((prior.array() > 0.0).count());
  if (count > support) {
    fail(ErrorKind::validation, "cannot draw " + std::to_string(count) + " distinct chips from " +
                                    std::to_string(support));
  }
  // Weighted sampling without replacement: keep the `count` largest keys
  // log(u) / p(c) (Efraimidis-Spirakis).
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, int>> keys;
  for (int c = 0; c < grid.size(); ++c) {
    const double u = unit(rng);
    if (prior[c] > 0.0) keys.emplace_back(std::log(std::max(u, 1e-300)) / prior[c], c);
  }
  std::partial_sort(keys.begin(), keys.begin() + count, keys.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int i = 0; i < count; ++i) out.push_back(keys[i].second);
  return out;
}

TransmissionDataset init_dataset(const ChipGrid& grid, int num_words, InitMode mode, int size, Rng& rng,
                                 const NamingSystem* source, bool with_replacement) {
  if (num_words < 1) fail(ErrorKind::validation, "K must be >= 1");
  if (mode == InitMode::from_system) {
    if (!source) fail(ErrorKind::validation, "from-system initialization needs a source system");
    if (source->num_chips() != grid.size()) fail(ErrorKind::validation, "source system does not match grid");
  }
  TransmissionDataset d;
  std::uniform_int_distribution<int> word(0, num_words - 1);
  for (int chip : sample_chips(grid, size, rng, with_replacement)) {
    const int w = mode == InitMode::uniform_random ? word(rng)
                                                   : sample_index(source->encoder().col(chip), rng);
    d.pairs.push_back({chip, w});
  }
  return d;
}

NamingSystem speaker_system(const AgentParams& speaker, const ChipGrid& grid, double input_scale) {
  Eigen::MatrixXd q(speaker.outputs(), grid.size());
  for (int c = 0; c < grid.size(); ++c) q.col(c) = speaker_forward(speaker, grid.chip(c).lab, input_scale);
  return NamingSystem(std::move(q));
}

Dyad make_dyad(int num_words, int num_chips, Rng& rng, const GameConfig& cfg) {
  Dyad d;
  d.speaker = make_speaker(num_words, rng, cfg.hidden);
  d.listener = make_listener(num_words, num_chips, rng, cfg.hidden);
  d.speaker_opt = OptimizerState::for_params(d.speaker, cfg.learning_rate);
  d.listener_opt = OptimizerState::for_params(d.listener, cfg.learning_rate);
  return d;
}

GameTables::GameTables(const ChipGrid& grid, const GameConfig& cfg) {
  for (const Chip& c : grid.chips()) {
    speaker_inputs.push_back(Eigen::Vector3d(c.lab[0], c.lab[1], c.lab[2]) * cfg.input_scale);
  }
  for (int w = 0; w < cfg.num_words; ++w) listener_inputs.push_back(one_hot(w, cfg.num_words));
  rewards.resize(grid.size(), grid.size());
  for (int c = 0; c < grid.size(); ++c) {
    for (int g = 0; g < grid.size(); ++g) rewards(c, g) = reward(grid, c, g, cfg.reward_sigma_sq);
  }
}

RoundResult play_signaling_round(Dyad& dyad, const ChipGrid& grid, const GameTables& tables,
                                 const GameConfig& cfg, Rng& rng, UpdateFlags flags) {
  RoundResult r;
  std::map<int, Eigen::VectorXd> speaker_cache;
  std::map<int, Eigen::VectorXd> listener_cache;
  double total = 0.0;
  for (int i = 0; i < cfg.batch; ++i) {
    const int chip = sample_index(grid.prior(), rng);
    auto s = speaker_cache.find(chip);
    if (s == speaker_cache.end()) {
      s = speaker_cache.emplace(chip, forward(dyad.speaker, tables.speaker_inputs[chip]).probs).first;
    }
    const int word = sample_index(s->second, rng);
    auto l = listener_cache.find(word);
    if (l == listener_cache.end()) {
      l = listener_cache.emplace(word, forward(dyad.listener, tables.listener_inputs[word]).probs).first;
    }
    const int guess = sample_index(l->second, rng);
    const double rw = tables.rewards(chip, guess);
    total += rw;
    r.speaker_episodes.push_back({chip, word, rw});
    r.listener_episodes.push_back({word, guess, rw});
  }
  r.mean_reward = total / cfg.batch;
  // Both gradients are taken at the pre-update parameters.
  if (flags.speaker) {
    reinforce_update(dyad.speaker, tables.speaker_inputs, r.speaker_episodes, dyad.speaker_opt,
                     cfg.reinforce_baseline);
  }
  if (flags.listener) {
    reinforce_update(dyad.listener, tables.listener_inputs, r.listener_episodes, dyad.listener_opt,
                     cfg.reinforce_baseline);
  }
  return r;
}

bool stopping_rule(std::span<const GenerationRecord> trajectory, int window, double tolerance) {
  if (static_cast<int>(trajectory.size()) < window) return false;
  const auto tail = trajectory.last(static_cast<std::size_t>(window));
  double cx_lo = std::numeric_limits<double>::infinity(), cx_hi = -cx_lo;
  double acc_lo = cx_lo, acc_hi = -cx_lo;
  for (const GenerationRecord& g : tail) {
    cx_lo = std::min(cx_lo, g.point.complexity);
    cx_hi = std::max(cx_hi, g.point.complexity);
    acc_lo = std::min(acc_lo, g.point.accuracy);
    acc_hi = std::max(acc_hi, g.point.accuracy);
  }
  return cx_hi - cx_lo < tolerance && acc_hi - acc_lo < tolerance;
}

namespace {

TransmissionDataset transmit(const NamingSystem& speaker, const ChipGrid& grid, const GameConfig& cfg,
                             Rng& rng) {
  TransmissionDataset d;
  for (int chip : sample_chips(grid, cfg.dataset_size, rng, cfg.transmission_with_replacement)) {
    int w = 0;
    if (cfg.argmax_transmission) {
      speaker.encoder().col(chip).maxCoeff(&w);
    } else {
      w = sample_index(speaker.encoder().col(chip), rng);
    }
    d.pairs.push_back({chip, w});
  }
  return d;
}

double play_phase(Dyad& dyad, const ChipGrid& grid, const GameTables& tables, const GameConfig& cfg,
                  Rng& rng, int steps, UpdateFlags flags) {
  double total = 0.0;
  for (int s = 0; s < steps; ++s) total += play_signaling_round(dyad, grid, tables, cfg, rng, flags).mean_reward;
  return steps > 0 ? total / steps : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

RunRecord run_nil_chain(const ChipGrid& grid, const MeaningModel& mm, const GameConfig& cfg,
                        const TransmissionDataset& init, std::uint64_t rng_seed) {
  validate(cfg);
  if (init.pairs.empty()) fail(ErrorKind::validation, "initial dataset is empty");
  for (const Sample& s : init.pairs) {
    if (s.target < 0 || s.target >= cfg.num_words || s.input_id < 0 || s.input_id >= grid.size()) {
      fail(ErrorKind::validation, "initial dataset has out-of-range chip or word");
    }
  }
  Rng rng(rng_seed);
  const GameTables tables(grid, cfg);
  const bool play = cfg.variant != Variant::il;
  RunRecord record;
  TransmissionDataset data = init;
  for (int t = 1; t <= cfg.max_generations; ++t) {
    // Learning phase: fresh agents, the speaker imitates D_t ...
    Dyad dyad = make_dyad(cfg.num_words, grid.size(), rng, cfg);
    train_supervised(dyad.speaker, tables.speaker_inputs, data.pairs, dyad.speaker_opt,
                     cfg.steps_per_phase, cfg.batch, rng);
    double mean_reward = std::numeric_limits<double>::quiet_NaN();
    if (play) {
      // ... and the listener learns from the fixed speaker.
      play_phase(dyad, grid, tables, cfg, rng, cfg.listener_steps, {false, true});
      // Interaction phase: joint reward, both agents update.
      dyad.speaker_opt = OptimizerState::for_params(dyad.speaker, cfg.learning_rate);
      dyad.listener_opt = OptimizerState::for_params(dyad.listener, cfg.learning_rate);
      mean_reward = play_phase(dyad, grid, tables, cfg, rng, cfg.steps_per_phase, {true, true});
    }
    NamingSystem sys = speaker_system(dyad.speaker, grid, cfg.input_scale);
    GenerationRecord g;
    g.generation = t;
    g.point = evaluate(sys, grid, mm);
    g.mean_reward = mean_reward;
    record.trajectory.push_back(g);
    record.final_system = std::move(sys);
    if (cfg.variant == Variant::c) break;
    if (stopping_rule(record.trajectory, cfg.convergence_window, cfg.convergence_tolerance)) {
      record.converged = true;
      break;
    }
    // Transmission phase.
    data = transmit(record.final_system, grid, cfg, rng);
  }
  record.generations = static_cast<int>(record.trajectory.size());
  return record;
}

void write_trajectory_csv(std::ostream& out, const RunRecord& record) {
  out << "generation,complexity,accuracy,mean_reward\n";
  char buf[128];
  for (const GenerationRecord& g : record.trajectory) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", g.generation, g.point.complexity,
                  g.point.accuracy, g.mean_reward);
    out << buf;
  }
}

namespace {

using RowKey = std::tuple<int, int, int>;

RowKey key_of(const ExperimentRow& r) { return {static_cast<int>(r.variant), r.num_words, r.seed}; }

std::string format_row(const ExperimentRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%d", variant_name(r.variant),
                r.num_words, r.seed, r.generations, r.converged ? 1 : 0, r.complexity, r.accuracy,
                r.epsilon, r.min_gnid, r.wcs_neighbor);
  return buf;
}

}  // namespace

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kExperimentHeader << '\n';
  for (const ExperimentRow& r : rows) out << format_row(r) << '\n';
}

std::vector<ExperimentRow> read_experiment_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  if (line != kExperimentHeader) fail(ErrorKind::format, "experiment table: unexpected header");
  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    // A partially written trailing line from an interrupted run is dropped.
    if (f.size() != 10) continue;
    ExperimentRow r;
    try {
      r.variant = parse_variant(f[0]);
      r.num_words = std::stoi(f[1]);
      r.seed = std::stoi(f[2]);
      r.generations = std::stoi(f[3]);
      r.converged = std::stoi(f[4]) != 0;
      r.complexity = std::stod(f[5]);
      r.accuracy = std::stod(f[6]);
      r.epsilon = std::stod(f[7]);
      r.min_gnid = std::stod(f[8]);
      r.wcs_neighbor = std::stoi(f[9]);
    } catch (const std::logic_error&) {
      continue;
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<ExperimentRow> run_experiment(const ChipGrid& grid, const MeaningModel& mm,
                                          const IBCurve& curve, std::span<const NamingSystem> wcs,
                                          const ExperimentSpec& spec) {
  if (spec.seeds_per_cell < 1 && spec.init_systems.empty()) {
    fail(ErrorKind::validation, "seeds_per_cell must be >= 1");
  }
  if (wcs.empty()) fail(ErrorKind::validation, "experiment needs reference systems");
  const bool from_systems = !spec.init_systems.empty();
  const int seeds = from_systems ? static_cast<int>(spec.init_systems.size()) : spec.seeds_per_cell;

  std::map<RowKey, ExperimentRow> done;
  if (spec.table_path && std::filesystem::exists(*spec.table_path)) {
    std::ifstream in(*spec.table_path);
    for (const ExperimentRow& r : read_experiment_csv(in)) done[key_of(r)] = r;
  }

  struct Task {
    ExperimentCell cell;
    int seed;
  };
  std::vector<Task> todo;
  for (const ExperimentCell& cell : spec.cells) {
    for (int s = 0; s < seeds; ++s) {
      Task t{cell, s};
      if (from_systems) t.cell.num_words = spec.init_systems[s].num_words();
      if (!done.count({static_cast<int>(t.cell.variant), t.cell.num_words, s})) todo.push_back(t);
    }
  }

  if (spec.trajectory_dir) std::filesystem::create_directories(*spec.trajectory_dir);
  std::mutex io_mutex;
  std::ofstream table;
  std::ofstream errors;
  if (spec.table_path) {
    const bool fresh = !std::filesystem::exists(*spec.table_path) || done.empty();
    if (fresh) {
      std::ofstream(*spec.table_path) << kExperimentHeader << '\n';
    } else {
      // Rewrite the parsed rows so a torn trailing line cannot corrupt appends.
      std::vector<ExperimentRow> rows;
      for (const auto& [k, r] : done) rows.push_back(r);
      std::ofstream out(*spec.table_path);
      write_experiment_csv(out, rows);
    }
    table.open(*spec.table_path, std::ios::app);
  }

  std::vector<ExperimentRow> fresh_rows(todo.size());
  parallel_for(static_cast<int>(todo.size()), spec.threads, [&](int i) {
    const Task& task = todo[i];
    ExperimentRow row;
    row.variant = task.cell.variant;
    row.num_words = task.cell.num_words;
    row.seed = task.seed;
    try {
      GameConfig cfg = spec.base;
      cfg.num_words = task.cell.num_words;
      cfg.variant = task.cell.variant;
      const auto k = static_cast<std::uint64_t>(cfg.num_words);
      const auto s = static_cast<std::uint64_t>(task.seed);
      // Variants share the initial dataset of a (K, seed) pair.
      Rng init_rng(derive_seed(spec.rng_seed, {k, s, 1}));
      const TransmissionDataset init =
          from_systems ? init_dataset(grid, cfg.num_words, InitMode::from_system, cfg.dataset_size, init_rng,
                                      &spec.init_systems[task.seed], cfg.transmission_with_replacement)
                       : init_dataset(grid, cfg.num_words, InitMode::uniform_random, cfg.dataset_size,
                                      init_rng, nullptr, cfg.transmission_with_replacement);
      const RunRecord rec = run_nil_chain(grid, mm, cfg, init, derive_seed(spec.rng_seed, {k, s, 2}));
      const IBPoint& last = rec.trajectory.back().point;
      row.generations = rec.generations;
      row.converged = rec.converged;
      row.complexity = last.complexity;
      row.accuracy = last.accuracy;
      row.epsilon = inefficiency_epsilon(last, curve).epsilon;
      std::tie(row.min_gnid, row.wcs_neighbor) = min_gnid_to_set(rec.final_system, wcs, grid);
      if (spec.trajectory_dir) {
        const std::string name = std::string("traj_") + (row.variant == Variant::il_c ? "ILC"
                                                         : row.variant == Variant::il ? "IL" : "C") +
                                 "_K" + std::to_string(row.num_words) + "_s" + std::to_string(row.seed);
        std::ofstream traj(std::filesystem::path(*spec.trajectory_dir) / (name + ".csv"));
        write_trajectory_csv(traj, rec);
        save_naming_system((std::filesystem::path(*spec.trajectory_dir) / (name + ".tsv")).string(),
                           rec.final_system);
      }
    } catch (const std::exception& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.generations = 0;
      row.converged = false;
      row.complexity = row.accuracy = row.epsilon = row.min_gnid = nan;
      row.wcs_neighbor = -1;
      std::lock_guard lock(io_mutex);
      if (spec.table_path) {
        if (!errors.is_open()) errors.open(*spec.table_path + ".errors", std::ios::app);
        errors << format_row(row) << " : " << e.what() << '\n';
      }
    }
    fresh_rows[i] = row;
    if (spec.table_path) {
      std::lock_guard lock(io_mutex);
      table << format_row(row) << '\n' << std::flush;
    }
  });

  for (const ExperimentRow& r : fresh_rows) done[key_of(r)] = r;
  std::vector<ExperimentRow> rows;
  for (const auto& [k, r] : done) rows.push_back(r);
  if (spec.table_path) {
    table.close();
    const std::string tmp = *spec.table_path + ".tmp";
    {
      std::ofstream out(tmp);
      write_experiment_csv(out, rows);
    }
    std::filesystem::rename(tmp, *spec.table_path);
  }
  return rows;
}

}  // namespace nilcolor

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

#include "random_model.hpp"

#include "error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace nilcolor {

NamingSystem kernel_system(const ChipGrid& grid, const RMParams& params) {
  const int k = static_cast<int>(params.prototypes.size());
  if (k < 1) fail(ErrorKind::validation, "kernel system needs at least one prototype");
  if (!(params.eta > 0.0)) fail(ErrorKind::validation, "eta must be positive");
  Eigen::MatrixXd q(k, grid.size());
  for (int c = 0; c < grid.size(); ++c) {
    double top = -std::numeric_limits<double>::infinity();
    for (int w = 0; w < k; ++w) {
      q(w, c) = -params.eta * perceptual_distance_sq(grid.chip(c), grid.chip(params.prototypes[w]));
      top = std::max(top, q(w, c));
    }
    for (int w = 0; w < k; ++w) q(w, c) = std::exp(q(w, c) - top);
  }
  return NamingSystem::from_unnormalized(std::move(q));
}

std::pair<RMParams, NamingSystem> sample_rm_system(const ChipGrid& grid, int num_words,
                                                   std::uint64_t rng_seed) {
  if (num_words < 1 || num_words > grid.size()) {
    fail(ErrorKind::validation, "K must be in [1, " + std::to_string(grid.size()) + "]");
  }
  std::mt19937_64 rng(rng_seed);
  RMParams params;
  params.num_words = num_words;
  params.eta = std::uniform_real_distribution<double>(kEtaLow, kEtaHigh)(rng);
  // Partial Fisher-Yates: the first K cells of a uniformly shuffled grid.
  std::vector<int> cells(static_cast<std::size_t>(grid.size()));
  std::iota(cells.begin(), cells.end(), 0);
  for (int i = 0; i < num_words; ++i) {
    std::uniform_int_distribution<int> pick(i, grid.size() - 1);
    std::swap(cells[i], cells[pick(rng)]);
  }
  params.prototypes.assign(cells.begin(), cells.begin() + num_words);
  NamingSystem sys = kernel_system(grid, params);
  return {std::move(params), std::move(sys)};
}

RMBatch generate_rm_batch(const ChipGrid& grid, const MeaningModel& mm, const IBCurve& curve,
                          std::span<const NamingSystem> wcs, const RMBatchConfig& cfg) {
  if (cfg.per_k < 1) fail(ErrorKind::validation, "per_k must be >= 1");
  if (cfg.k_min < 1 || cfg.k_max < cfg.k_min) fail(ErrorKind::validation, "bad K range");
  if (!(cfg.complexity_low <= cfg.complexity_high)) fail(ErrorKind::validation, "bad complexity range");
  if (wcs.empty()) fail(ErrorKind::validation, "RM batch needs reference systems");

  const int num_k = cfg.k_max - cfg.k_min + 1;
  RMBatch batch;
  batch.threshold = cfg.threshold;
  batch.systems.resize(static_cast<std::size_t>(num_k) * cfg.per_k);
  parallel_for(static_cast<int>(batch.systems.size()), cfg.threads, [&](int slot) {
    const int k = cfg.k_min + slot / cfg.per_k;
    const int index = slot % cfg.per_k;
    RMEntry& entry = batch.systems[slot];
    for (int attempt = 0;; ++attempt) {
      if (attempt >= cfg.max_consecutive_rejections) {
        fail(ErrorKind::numerical,
             "RM sampling: " + std::to_string(attempt) + " consecutive draws for K=" + std::to_string(k) +
                 " fell outside the complexity range; check the configuration");
      }
      const std::uint64_t seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(k),
                                                        static_cast<std::uint64_t>(index),
                                                        static_cast<std::uint64_t>(attempt)});
      auto [params, sys] = sample_rm_system(grid, k, seed);
      const double cx = complexity(sys, grid);
      if (cx < cfg.complexity_low || cx > cfg.complexity_high) continue;
      entry.seed = seed;
      entry.params = std::move(params);
      entry.point = evaluate(sys, grid, mm);
      const EpsilonFit fit = inefficiency_epsilon(entry.point, curve);
      entry.point.epsilon = fit.epsilon;
      entry.point.fitted_beta = fit.beta;
      std::tie(entry.min_gnid, entry.wcs_neighbor) = min_gnid_to_set(sys, wcs, grid);
      entry.system = std::move(sys);
      return;
    }
  });
  relabel(batch, cfg.threshold);
  return batch;
}

void relabel(RMBatch& batch, double threshold) {
  batch.threshold = threshold;
  for (RMEntry& e : batch.systems) {
    e.label = e.min_gnid < threshold ? RMLabel::similar : RMLabel::dissimilar;
  }
}

double dissimilar_fraction(const RMBatch& batch) {
  if (batch.systems.empty()) return 0.0;
  const auto d = std::count_if(batch.systems.begin(), batch.systems.end(),
                               [](const RMEntry& e) { return e.label == RMLabel::dissimilar; });
  return static_cast<double>(d) / static_cast<double>(batch.systems.size());
}

void write_rm_manifest(std::ostream& out, const RMBatch& batch) {
  out << "K,seed,eta,prototypes,complexity,accuracy,epsilon,min_gnid,label\n";
  char buf[256];
  for (const RMEntry& e : batch.systems) {
    std::string protos;
    for (std::size_t i = 0; i < e.params.prototypes.size(); ++i) {
      if (i) protos += ';';
      protos += std::to_string(e.params.prototypes[i]);
    }
    std::snprintf(buf, sizeof buf, "%d,%llu,%.17g,", e.params.num_words,
                  static_cast<unsigned long long>(e.seed), e.params.eta);
    out << buf << protos;
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g,%s\n", e.point.complexity, e.point.accuracy,
                  e.point.epsilon.value_or(0.0), e.min_gnid,
                  e.label == RMLabel::similar ? "RM_s" : "RM_d");
    out << buf;
  }
}

RMBatch read_rm_manifest(std::istream& in, const ChipGrid& grid) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("K,seed,eta,prototypes", 0) != 0) {
    fail(ErrorKind::format, "RM manifest: missing header");
  }
  RMBatch batch;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 9) fail(ErrorKind::format, "RM manifest: expected 9 fields in '" + line + "'");
    RMEntry e;
    try {
      const int k = std::stoi(f[0]);
      e.seed = std::stoull(f[1]);
      auto [params, sys] = sample_rm_system(grid, k, e.seed);
      e.params = std::move(params);
      e.system = std::move(sys);
      e.point.complexity = std::stod(f[4]);
      e.point.accuracy = std::stod(f[5]);
      e.point.epsilon = std::stod(f[6]);
      e.min_gnid = std::stod(f[7]);
    } catch (const std::logic_error&) {
      fail(ErrorKind::format, "RM manifest: bad number in '" + line + "'");
    }
    if (f[8] != "RM_s" && f[8] != "RM_d") fail(ErrorKind::format, "RM manifest: bad label " + f[8]);
    e.label = f[8] == "RM_s" ? RMLabel::similar : RMLabel::dissimilar;
    batch.systems.push_back(std::move(e));
  }
  return batch;
}

}  // namespace nilcolor

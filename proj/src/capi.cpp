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

#include "nilcolor/nilcolor.h"

#include "color_domain.hpp"
#include "error.hpp"
#include "ib.hpp"
#include "naming_system.hpp"
#include "nil.hpp"
#include "parallel.hpp"
#include "random_model.hpp"
#include "report.hpp"
#include "stats.hpp"
#include "wcs.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace nilcolor;

struct nc_context {
  ChipGrid grid;
  MeaningModel mm;
  std::optional<std::string> data_dir;
  bool require_wcs = false;
  std::optional<std::string> cache_dir;
  int threads = 1;
  double info_bound = 0.0;

  std::once_flag refs_once;
  std::vector<WcsLanguage> languages;
  std::vector<NamingSystem> references;
  bool fixtures = false;

  nc_context(ChipGrid g, MeaningModel m) : grid(std::move(g)), mm(std::move(m)) {}
};

struct nc_curve {
  IBCurve curve;
};

struct nc_system {
  NamingSystem sys;
};

namespace {

thread_local std::string g_last_error;

nc_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return NC_ERR_VALIDATION;
    case ErrorKind::format: return NC_ERR_FORMAT;
    case ErrorKind::data_missing: return NC_ERR_DATA_MISSING;
    case ErrorKind::numerical: return NC_ERR_NUMERICAL;
    case ErrorKind::io: return NC_ERR_IO;
  }
  return NC_ERR_INTERNAL;
}

template <class F>
nc_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return NC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NC_ERR_INTERNAL;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return NC_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NC_ERR_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) fail(ErrorKind::validation, what);
}

void load_references(nc_context* ctx) {
  std::call_once(ctx->refs_once, [ctx] {
    bool fixtures = false;
    if (ctx->require_wcs && !(ctx->data_dir && std::filesystem::exists(
                                                   std::filesystem::path(*ctx->data_dir) / "term.txt"))) {
      fail(ErrorKind::data_missing, "WCS data not found (term.txt) in " + ctx->data_dir.value_or("<unset>"));
    }
    ctx->languages = reference_languages(ctx->grid, ctx->data_dir, &fixtures);
    ctx->references = encoders_of(ctx->languages);
    ctx->fixtures = fixtures;
  });
}

std::ofstream open_out(const char* path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) fail(ErrorKind::io, std::string("cannot write ") + path);
  return out;
}

// Writes through a temporary so readers never see a partial file.
template <class F>
void write_file(const char* path, F&& body) {
  const std::string tmp = std::string(path) + ".tmp";
  {
    std::ofstream out = open_out(tmp.c_str());
    body(out);
    if (!out) fail(ErrorKind::io, std::string("write failed: ") + path);
  }
  std::filesystem::rename(tmp, path);
}

GameConfig to_config(const nc_game_options& o) {
  GameConfig c;
  c.num_words = o.num_words;
  switch (o.variant) {
    case NC_VARIANT_IL_C: c.variant = Variant::il_c; break;
    case NC_VARIANT_IL: c.variant = Variant::il; break;
    case NC_VARIANT_C: c.variant = Variant::c; break;
    default: fail(ErrorKind::validation, "unknown variant");
  }
  c.reward_sigma_sq = o.reward_sigma_sq;
  c.steps_per_phase = o.steps_per_phase;
  c.listener_steps = o.listener_steps;
  c.batch = o.batch;
  c.learning_rate = o.learning_rate;
  c.hidden = o.hidden;
  c.input_scale = o.input_scale;
  c.reinforce_baseline = o.reinforce_baseline != 0;
  c.dataset_size = o.dataset_size;
  c.argmax_transmission = o.argmax_transmission != 0;
  c.transmission_with_replacement = o.transmission_with_replacement != 0;
  c.max_generations = o.max_generations;
  c.convergence_window = o.convergence_window;
  c.convergence_tolerance = o.convergence_tolerance;
  validate(c);
  return c;
}

stats::Sided sided_of(nc_alternative alt) { return alt == NC_TWO_SIDED ? stats::Sided::two : stats::Sided::one; }

void fill_result(const stats::TestResult& r, nc_test_result* out) {
  out->statistic = r.statistic;
  out->p_value = r.p_value;
  out->n = r.n;
  out->m = r.m;
  out->exact = r.method == stats::Method::exact ? 1 : 0;
}

RMBatch read_manifest(const nc_context* ctx, const char* path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::data_missing, std::string("cannot read RM manifest ") + path);
  return read_rm_manifest(in, ctx->grid);
}

std::vector<NamingSystem> dissimilar_systems(const RMBatch& batch) {
  std::vector<NamingSystem> out;
  for (const RMEntry& e : batch.systems) {
    if (e.label == RMLabel::dissimilar) out.push_back(e.system);
  }
  return out;
}

}  // namespace

extern "C" {

const char* nc_version(void) { return NC_VERSION; }

const char* nc_last_error(void) { return g_last_error.c_str(); }

const char* nc_status_name(nc_status status) {
  switch (status) {
    case NC_OK: return "ok";
    case NC_ERR_VALIDATION: return "validation error";
    case NC_ERR_DATA_MISSING: return "data missing";
    case NC_ERR_NUMERICAL: return "numerical failure";
    case NC_ERR_FORMAT: return "format error";
    case NC_ERR_IO: return "i/o error";
    case NC_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void nc_context_options_init(nc_context_options* opts) {
  if (!opts) return;
  *opts = nc_context_options{};
  opts->sigma_sq = kDefaultSigmaSq;
  opts->threads = 0;
}

nc_status nc_context_create(const nc_context_options* opts, nc_context** out) {
  return guarded([&] {
    require(opts && out, "null argument");
    *out = nullptr;
    require(opts->sigma_sq > 0.0, "sigma_sq must be positive");
    GridLoadOptions lo;
    lo.renormalize_prior = opts->renormalize_prior != 0;
    ChipGrid grid = [&] {
      if (opts->chips_path) {
        return load_chip_grid_files(opts->chips_path,
                                    opts->prior_path ? std::optional<std::string>(opts->prior_path) : std::nullopt,
                                    lo);
      }
      if (opts->prior_path) {
        std::istringstream table(bundled_chip_table());
        std::ifstream prior(opts->prior_path);
        if (!prior) fail(ErrorKind::data_missing, std::string("cannot read prior ") + opts->prior_path);
        return load_chip_grid(table, &prior, lo);
      }
      return default_chip_grid();
    }();
    MeaningModel mm = build_meaning_model(grid, opts->sigma_sq);
    auto ctx = std::make_unique<nc_context>(std::move(grid), std::move(mm));
    if (opts->data_dir) ctx->data_dir = opts->data_dir;
    ctx->require_wcs = opts->require_wcs != 0;
    if (opts->cache_dir) ctx->cache_dir = opts->cache_dir;
    ctx->threads = opts->threads > 0 ? opts->threads : default_threads();
    ctx->info_bound = meaning_information(ctx->grid, ctx->mm);
    *out = ctx.release();
  });
}

void nc_context_destroy(nc_context* ctx) { delete ctx; }

int nc_context_num_chips(const nc_context* ctx) { return ctx ? ctx->grid.size() : 0; }

uint64_t nc_context_grid_hash(const nc_context* ctx) { return ctx ? ctx->grid.hash() : 0; }

double nc_context_info_bound(const nc_context* ctx) { return ctx ? ctx->info_bound : 0.0; }

nc_status nc_reference_count(nc_context* ctx, size_t* count, int* fixtures) {
  return guarded([&] {
    require(ctx && count, "null argument");
    load_references(ctx);
    *count = ctx->references.size();
    if (fixtures) *fixtures = ctx->fixtures ? 1 : 0;
  });
}

nc_status nc_reference_system(nc_context* ctx, size_t index, nc_system** out) {
  return guarded([&] {
    require(ctx && out, "null argument");
    load_references(ctx);
    require(index < ctx->references.size(), "reference index out of range");
    *out = new nc_system{ctx->references[index]};
  });
}

const char* nc_reference_name(nc_context* ctx, size_t index) {
  if (!ctx) return nullptr;
  if (guarded([&] { load_references(ctx); }) != NC_OK) return nullptr;
  return index < ctx->languages.size() ? ctx->languages[index].name.c_str() : nullptr;
}

void nc_frontier_options_init(nc_frontier_options* opts) {
  if (!opts) return;
  opts->beta_high = 8192.0;
  opts->steps = 1500;
  opts->geometric = 0;
  opts->min_offset = 1e-3;
  const FrontierOptions d;
  opts->tolerance = d.tolerance;
  opts->max_sweeps = d.max_sweeps;
  opts->merge_tolerance = d.merge_tolerance;
}

nc_status nc_frontier(nc_context* ctx, const nc_frontier_options* opts, nc_curve** out, int* cache_hit) {
  return guarded([&] {
    require(ctx && opts && out, "null argument");
    *out = nullptr;
    FrontierOptions fo;
    fo.betas = opts->geometric ? geometric_beta_schedule(opts->beta_high, 1.0, opts->steps)
                               : annealing_beta_schedule(opts->beta_high, opts->steps, opts->min_offset);
    fo.tolerance = opts->tolerance;
    fo.max_sweeps = opts->max_sweeps;
    fo.merge_tolerance = opts->merge_tolerance;
    auto c = std::make_unique<nc_curve>();
    bool hit = false;
    if (ctx->cache_dir) {
      c->curve = cached_ib_frontier(ctx->grid, ctx->mm, fo, *ctx->cache_dir, &hit);
    } else {
      c->curve = ib_frontier(ctx->grid, ctx->mm, fo);
    }
    if (cache_hit) *cache_hit = hit ? 1 : 0;
    *out = c.release();
  });
}

nc_status nc_curve_load(const char* path, nc_curve** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::ifstream in(path);
    if (!in) fail(ErrorKind::data_missing, std::string("cannot read curve ") + path);
    auto c = std::make_unique<nc_curve>();
    c->curve = read_curve_csv(in);
    *out = c.release();
  });
}

nc_status nc_curve_save(const nc_curve* curve, const char* path) {
  return guarded([&] {
    require(curve && path, "null argument");
    write_file(path, [&](std::ostream& out) { write_curve_csv(out, curve->curve); });
  });
}

size_t nc_curve_size(const nc_curve* curve) { return curve ? curve->curve.points.size() : 0; }

nc_status nc_curve_point(const nc_curve* curve, size_t index, double* beta, double* complexity,
                         double* accuracy) {
  return guarded([&] {
    require(curve, "null argument");
    require(index < curve->curve.points.size(), "curve index out of range");
    if (beta) *beta = curve->curve.betas[index];
    if (complexity) *complexity = curve->curve.points[index].complexity;
    if (accuracy) *accuracy = curve->curve.points[index].accuracy;
  });
}

void nc_curve_destroy(nc_curve* curve) { delete curve; }

nc_status nc_system_load(nc_context* ctx, const char* path, nc_system** out) {
  return guarded([&] {
    require(ctx && path && out, "null argument");
    if (!std::filesystem::exists(path)) fail(ErrorKind::data_missing, std::string("no such file: ") + path);
    *out = new nc_system{load_naming_system(path, ctx->grid.size())};
  });
}

nc_status nc_system_save(const nc_system* sys, const char* path) {
  return guarded([&] {
    require(sys && path, "null argument");
    write_file(path, [&](std::ostream& out) { write_naming_system(out, sys->sys); });
  });
}

nc_status nc_system_from_matrix(nc_context* ctx, int num_words, const double* probs, nc_system** out) {
  return guarded([&] {
    require(ctx && probs && out, "null argument");
    require(num_words >= 1, "K must be >= 1");
    const int n = ctx->grid.size();
    Eigen::MatrixXd q(num_words, n);
    for (int w = 0; w < num_words; ++w) {
      for (int c = 0; c < n; ++c) q(w, c) = probs[static_cast<std::size_t>(w) * n + c];
    }
    *out = new nc_system{NamingSystem(std::move(q))};
  });
}

int nc_system_num_words(const nc_system* sys) { return sys ? sys->sys.num_words() : 0; }

double nc_system_prob(const nc_system* sys, int word, int chip) {
  if (!sys || word < 0 || word >= sys->sys.num_words() || chip < 0 || chip >= sys->sys.num_chips()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return sys->sys(word, chip);
}

void nc_system_destroy(nc_system* sys) { delete sys; }

nc_status nc_system_analyze(nc_context* ctx, const nc_system* sys, const nc_curve* curve, nc_analysis* out) {
  return guarded([&] {
    require(ctx && sys && curve && out, "null argument");
    require(sys->sys.num_chips() == ctx->grid.size(), "system does not match grid");
    load_references(ctx);
    const AnalysisRow row = analyze_system("", sys->sys, ctx->grid, ctx->mm, curve->curve, ctx->references);
    out->num_words = row.num_words;
    out->complexity = row.point.complexity;
    out->accuracy = row.point.accuracy;
    out->epsilon = row.point.epsilon.value_or(0.0);
    out->beta = row.point.fitted_beta.value_or(0.0);
    out->min_gnid = row.min_gnid;
    out->neighbor = row.wcs_neighbor;
  });
}

nc_status nc_gnid(nc_context* ctx, const nc_system* a, const nc_system* b, double* out) {
  return guarded([&] {
    require(ctx && a && b && out, "null argument");
    *out = gnid(a->sys, b->sys, ctx->grid);
  });
}

nc_status nc_analyze_files(nc_context* ctx, const nc_curve* curve, const char* const* paths, size_t count,
                           const char* out_csv) {
  return guarded([&] {
    require(ctx && curve && (paths || count == 0) && out_csv, "null argument");
    load_references(ctx);
    std::vector<AnalysisRow> rows;
    for (size_t i = 0; i < count; ++i) {
      if (!std::filesystem::exists(paths[i])) fail(ErrorKind::data_missing, std::string("no such file: ") + paths[i]);
      const NamingSystem sys = load_naming_system(paths[i], ctx->grid.size());
      rows.push_back(analyze_system(std::filesystem::path(paths[i]).stem().string(), sys, ctx->grid, ctx->mm,
                                    curve->curve, ctx->references));
    }
    std::sort(rows.begin(), rows.end(), [](const AnalysisRow& a, const AnalysisRow& b) { return a.name < b.name; });
    write_file(out_csv, [&](std::ostream& out) { write_analysis_csv(out, rows); });
  });
}

nc_status nc_analyze_references(nc_context* ctx, const nc_curve* curve, const char* out_csv) {
  return guarded([&] {
    require(ctx && curve && out_csv, "null argument");
    load_references(ctx);
    std::vector<AnalysisRow> rows(ctx->languages.size());
    parallel_for(static_cast<int>(rows.size()), ctx->threads, [&](int i) {
      // A language is compared against the others, not itself.
      std::vector<NamingSystem> others;
      for (std::size_t j = 0; j < ctx->references.size(); ++j) {
        if (static_cast<int>(j) != i) others.push_back(ctx->references[j]);
      }
      rows[i] = analyze_system(ctx->languages[i].name, ctx->references[i], ctx->grid, ctx->mm, curve->curve, others);
      if (rows[i].wcs_neighbor >= i) ++rows[i].wcs_neighbor;
    });
    write_file(out_csv, [&](std::ostream& out) { write_analysis_csv(out, rows); });
  });
}

void nc_rm_options_init(nc_rm_options* opts) {
  if (!opts) return;
  const RMBatchConfig d;
  opts->per_k = d.per_k;
  opts->k_min = d.k_min;
  opts->k_max = d.k_max;
  opts->complexity_low = d.complexity_low;
  opts->complexity_high = d.complexity_high;
  opts->threshold = d.threshold;
  opts->seed = 0;
  opts->max_consecutive_rejections = d.max_consecutive_rejections;
}

nc_status nc_rm_generate(nc_context* ctx, const nc_curve* curve, const nc_rm_options* opts, const char* manifest_csv,
                         nc_rm_summary* summary) {
  return guarded([&] {
    require(ctx && curve && opts, "null argument");
    load_references(ctx);
    RMBatchConfig cfg;
    cfg.per_k = opts->per_k;
    cfg.k_min = opts->k_min;
    cfg.k_max = opts->k_max;
    cfg.complexity_low = opts->complexity_low;
    cfg.complexity_high = opts->complexity_high;
    cfg.threshold = opts->threshold;
    cfg.seed = opts->seed;
    cfg.max_consecutive_rejections = opts->max_consecutive_rejections;
    cfg.threads = ctx->threads;
    const RMBatch batch = generate_rm_batch(ctx->grid, ctx->mm, curve->curve, ctx->references, cfg);
    if (manifest_csv) write_file(manifest_csv, [&](std::ostream& out) { write_rm_manifest(out, batch); });
    if (summary) {
      summary->count = batch.systems.size();
      summary->dissimilar_fraction = dissimilar_fraction(batch);
      std::vector<double> eps;
      double lo = std::numeric_limits<double>::quiet_NaN(), hi = lo;
      for (const RMEntry& e : batch.systems) {
        eps.push_back(e.point.epsilon.value_or(0.0));
        if (e.label == RMLabel::dissimilar) {
          lo = std::isnan(lo) ? e.point.complexity : std::min(lo, e.point.complexity);
          hi = std::isnan(hi) ? e.point.complexity : std::max(hi, e.point.complexity);
        }
      }
      std::sort(eps.begin(), eps.end());
      const std::size_t n = eps.size();
      summary->median_epsilon =
          n == 0 ? std::numeric_limits<double>::quiet_NaN()
                 : (n % 2 ? eps[n / 2] : 0.5 * (eps[n / 2 - 1] + eps[n / 2]));
      summary->dissimilar_complexity_min = lo;
      summary->dissimilar_complexity_max = hi;
    }
  });
}

nc_status nc_rm_dissimilar(nc_context* ctx, const char* manifest_csv, size_t index, nc_system** out, size_t* count) {
  return guarded([&] {
    require(ctx && manifest_csv, "null argument");
    const std::vector<NamingSystem> d = dissimilar_systems(read_manifest(ctx, manifest_csv));
    if (count) *count = d.size();
    if (out) {
      require(index < d.size(), "RM_d index out of range");
      *out = new nc_system{d[index]};
    }
  });
}

void nc_game_options_init(nc_game_options* opts) {
  if (!opts) return;
  const GameConfig d;
  opts->num_words = d.num_words;
  opts->variant = NC_VARIANT_IL_C;
  opts->reward_sigma_sq = d.reward_sigma_sq;
  opts->steps_per_phase = d.steps_per_phase;
  opts->listener_steps = d.listener_steps;
  opts->batch = d.batch;
  opts->learning_rate = d.learning_rate;
  opts->hidden = d.hidden;
  opts->input_scale = d.input_scale;
  opts->reinforce_baseline = d.reinforce_baseline ? 1 : 0;
  opts->dataset_size = d.dataset_size;
  opts->argmax_transmission = d.argmax_transmission ? 1 : 0;
  opts->transmission_with_replacement = d.transmission_with_replacement ? 1 : 0;
  opts->max_generations = d.max_generations;
  opts->convergence_window = d.convergence_window;
  opts->convergence_tolerance = d.convergence_tolerance;
}

const char* nc_variant_name(nc_variant variant) {
  switch (variant) {
    case NC_VARIANT_IL_C: return "IL+C";
    case NC_VARIANT_IL: return "IL";
    case NC_VARIANT_C: return "C";
  }
  return "?";
}

nc_status nc_parse_variant(const char* text, nc_variant* out) {
  return guarded([&] {
    require(text && out, "null argument");
    switch (parse_variant(text)) {
      case Variant::il_c: *out = NC_VARIANT_IL_C; break;
      case Variant::il: *out = NC_VARIANT_IL; break;
      case Variant::c: *out = NC_VARIANT_C; break;
    }
  });
}

nc_status nc_run_chain(nc_context* ctx, const nc_curve* curve, const nc_game_options* opts, const nc_system* init,
                       uint64_t seed, const char* trajectory_csv, const char* system_out,
                       nc_chain_summary* summary) {
  return guarded([&] {
    require(ctx && curve && opts, "null argument");
    load_references(ctx);
    GameConfig cfg = to_config(*opts);
    if (init) {
      require(init->sys.num_chips() == ctx->grid.size(), "initial system does not match grid");
      cfg.num_words = init->sys.num_words();
    }
    const auto k = static_cast<std::uint64_t>(cfg.num_words);
    Rng init_rng(derive_seed(seed, {k, 0, 1}));
    const TransmissionDataset data =
        init ? init_dataset(ctx->grid, cfg.num_words, InitMode::from_system, cfg.dataset_size, init_rng, &init->sys,
                            cfg.transmission_with_replacement)
             : init_dataset(ctx->grid, cfg.num_words, InitMode::uniform_random, cfg.dataset_size, init_rng, nullptr,
                            cfg.transmission_with_replacement);
    const RunRecord rec = run_nil_chain(ctx->grid, ctx->mm, cfg, data, derive_seed(seed, {k, 0, 2}));
    if (trajectory_csv) write_file(trajectory_csv, [&](std::ostream& out) { write_trajectory_csv(out, rec); });
    if (system_out) write_file(system_out, [&](std::ostream& out) { write_naming_system(out, rec.final_system); });
    if (summary) {
      const IBPoint& p = rec.trajectory.back().point;
      summary->generations = rec.generations;
      summary->converged = rec.converged ? 1 : 0;
      summary->complexity = p.complexity;
      summary->accuracy = p.accuracy;
      summary->epsilon = inefficiency_epsilon(p, curve->curve).epsilon;
      std::tie(summary->min_gnid, summary->neighbor) = min_gnid_to_set(rec.final_system, ctx->references, ctx->grid);
      summary->initial_min_gnid = std::numeric_limits<double>::quiet_NaN();
      summary->initial_epsilon = std::numeric_limits<double>::quiet_NaN();
      if (init) {
        summary->initial_min_gnid = min_gnid_to_set(init->sys, ctx->references, ctx->grid).first;
        summary->initial_epsilon = inefficiency_epsilon(init->sys, curve->curve, ctx->grid, ctx->mm).epsilon;
      }
    }
  });
}

void nc_experiment_options_init(nc_experiment_options* opts) {
  if (!opts) return;
  *opts = nc_experiment_options{};
  opts->seeds_per_cell = 10;
}

nc_status nc_run_experiment(nc_context* ctx, const nc_curve* curve, const nc_game_options* game,
                            const nc_experiment_options* opts, size_t* rows) {
  return guarded([&] {
    require(ctx && curve && game && opts, "null argument");
    require(opts->table_csv, "experiment needs an output table");
    require(opts->variants && opts->num_variants > 0, "experiment needs at least one variant");
    require(opts->rm_manifest || (opts->ks && opts->num_ks > 0), "experiment needs at least one K");
    require(opts->seeds_per_cell >= 1, "seeds_per_cell must be >= 1");
    load_references(ctx);
    ExperimentSpec spec;
    spec.base = to_config(*game);
    spec.rng_seed = opts->seed;
    spec.seeds_per_cell = opts->seeds_per_cell;
    spec.table_path = std::string(opts->table_csv);
    if (opts->trajectory_dir) spec.trajectory_dir = std::string(opts->trajectory_dir);
    spec.threads = opts->threads > 0 ? opts->threads : ctx->threads;
    for (size_t v = 0; v < opts->num_variants; ++v) {
      ExperimentCell cell;
      cell.variant = opts->variants[v] == NC_VARIANT_IL ? Variant::il
                     : opts->variants[v] == NC_VARIANT_C ? Variant::c
                                                         : Variant::il_c;
      if (opts->rm_manifest) {
        spec.cells.push_back(cell);
      } else {
        for (size_t i = 0; i < opts->num_ks; ++i) {
          cell.num_words = opts->ks[i];
          require(cell.num_words >= 1, "K must be >= 1");
          spec.cells.push_back(cell);
        }
      }
    }
    if (opts->rm_manifest) {
      std::vector<NamingSystem> d = dissimilar_systems(read_manifest(ctx, opts->rm_manifest));
      if (d.empty()) fail(ErrorKind::validation, "manifest has no RM_d systems");
      if (static_cast<int>(d.size()) > opts->seeds_per_cell) d.resize(static_cast<std::size_t>(opts->seeds_per_cell));
      spec.init_systems = std::move(d);
    }
    const std::vector<ExperimentRow> table = run_experiment(ctx->grid, ctx->mm, curve->curve, ctx->references, spec);
    if (rows) *rows = table.size();
  });
}

nc_status nc_mann_whitney(const double* x, size_t n, const double* y, size_t m, nc_alternative alt,
                          nc_test_result* out) {
  return guarded([&] {
    require(x && y && out, "null argument");
    const auto r = stats::mann_whitney_u(std::span<const double>(x, n), std::span<const double>(y, m), sided_of(alt),
                                         alt == NC_GREATER ? stats::Direction::greater : stats::Direction::less);
    fill_result(r, out);
  });
}

nc_status nc_wilcoxon(const double* x, const double* y, size_t n, nc_alternative alt, nc_test_result* out) {
  return guarded([&] {
    require(x && y && out, "null argument");
    std::vector<double> d(n);
    for (size_t i = 0; i < n; ++i) d[i] = x[i] - y[i];
    const auto r = stats::wilcoxon_signed_rank(d, sided_of(alt),
                                               alt == NC_LESS ? stats::Direction::less : stats::Direction::greater);
    fill_result(r, out);
  });
}

nc_status nc_bonferroni(const double* p_values, size_t k, double alpha, double* adjusted, int* reject) {
  return guarded([&] {
    require(p_values && adjusted, "null argument");
    const auto r = stats::bonferroni(std::span<const double>(p_values, k), alpha);
    for (size_t i = 0; i < k; ++i) {
      adjusted[i] = r.adjusted[i];
      if (reject) reject[i] = r.reject[i] ? 1 : 0;
    }
  });
}

nc_status nc_render_map(nc_context* ctx, const nc_system* sys, const char* svg_path, const char* csv_path,
                        const char* title) {
  return guarded([&] {
    require(ctx && sys, "null argument");
    const std::vector<MosaicCell> cells = render_map(sys->sys, ctx->grid);
    if (svg_path) {
      write_file(svg_path, [&](std::ostream& out) { write_mosaic_svg(out, cells, title ? title : ""); });
    }
    if (csv_path) write_file(csv_path, [&](std::ostream& out) { write_mosaic_csv(out, cells); });
  });
}

nc_status nc_render_ib_plane(nc_context* ctx, const nc_curve* curve, const nc_series* series, size_t count,
                             const char* svg_path) {
  return guarded([&] {
    require(ctx && curve && svg_path && (series || count == 0), "null argument");
    std::vector<PointSeries> s;
    for (size_t i = 0; i < count; ++i) {
      PointSeries ps;
      ps.label = series[i].label ? series[i].label : "";
      ps.color = series[i].color ? series[i].color : "#4477aa";
      ps.marker = series[i].marker ? series[i].marker : 'o';
      for (size_t j = 0; j < series[i].count; ++j) {
        IBPoint p;
        p.complexity = series[i].complexity[j];
        p.accuracy = series[i].accuracy[j];
        ps.points.push_back(p);
      }
      s.push_back(std::move(ps));
    }
    write_file(svg_path, [&](std::ostream& out) { write_ib_plane_svg(out, curve->curve, s, ctx->info_bound); });
  });
}

nc_status nc_render_histogram(const nc_histogram* groups, size_t count, double lo, double hi, int bins,
                              const char* x_label, const char* svg_path) {
  return guarded([&] {
    require(svg_path && (groups || count == 0), "null argument");
    std::vector<Histogram> h;
    for (size_t i = 0; i < count; ++i) {
      h.push_back({groups[i].label ? groups[i].label : "", groups[i].color ? groups[i].color : "#4477aa",
                   std::vector<double>(groups[i].values, groups[i].values + groups[i].count)});
    }
    write_file(svg_path,
               [&](std::ostream& out) { write_histogram_svg(out, h, lo, hi, bins, x_label ? x_label : ""); });
  });
}

nc_status nc_render_before_after(const double* before, const double* after, size_t count, const char* y_label,
                                 const char* svg_path) {
  return guarded([&] {
    require(svg_path && ((before && after) || count == 0), "null argument");
    const std::vector<double> b(before, before + count), a(after, after + count);
    write_file(svg_path, [&](std::ostream& out) { write_before_after_svg(out, b, a, y_label ? y_label : ""); });
  });
}

}  // extern "C"

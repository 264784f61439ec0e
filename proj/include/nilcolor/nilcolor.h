/*
 * Copyright 2026 The nilcolor Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* nilcolor C API.
 *
 * Every function that can fail returns an nc_status; on failure a message is
 * available from nc_last_error() on the calling thread. Objects are opaque
 * handles released with the matching *_destroy function. Option structs must
 * be initialized with their *_init function before fields are overridden.
 */

#ifndef NILCOLOR_NILCOLOR_H
#define NILCOLOR_NILCOLOR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NC_API __declspec(dllexport)
#else
#define NC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define NC_VERSION "0.1.0"

typedef enum nc_status {
  NC_OK = 0,
  NC_ERR_VALIDATION = 1,
  NC_ERR_DATA_MISSING = 2,
  NC_ERR_NUMERICAL = 3,
  NC_ERR_FORMAT = 4,
  NC_ERR_IO = 5,
  NC_ERR_INTERNAL = 6
} nc_status;

typedef enum nc_variant { NC_VARIANT_IL_C = 0, NC_VARIANT_IL = 1, NC_VARIANT_C = 2 } nc_variant;

typedef enum nc_alternative { NC_TWO_SIDED = 0, NC_LESS = 1, NC_GREATER = 2 } nc_alternative;

typedef struct nc_context nc_context;
typedef struct nc_curve nc_curve;
typedef struct nc_system nc_system;

NC_API const char* nc_version(void);
NC_API const char* nc_last_error(void);
NC_API const char* nc_status_name(nc_status status);

/* ------------------------------------------------------------------------ */
/* Context: chip grid, meaning model and reference languages.               */

typedef struct nc_context_options {
  const char* chips_path;  /* NULL: bundled 330-chip table */
  const char* prior_path;  /* NULL: uniform prior */
  int renormalize_prior;   /* accept a prior that does not sum to 1 */
  double sigma_sq;         /* meaning-model width; default 64 */
  const char* data_dir;    /* WCS directory with term.txt; NULL: fixtures */
  int require_wcs;         /* fail with NC_ERR_DATA_MISSING instead of using fixtures */
  const char* cache_dir;   /* frontier cache; NULL disables caching */
  int threads;             /* worker threads; 0 = hardware concurrency */
} nc_context_options;

NC_API void nc_context_options_init(nc_context_options* opts);
NC_API nc_status nc_context_create(const nc_context_options* opts, nc_context** out);
NC_API void nc_context_destroy(nc_context* ctx);
NC_API int nc_context_num_chips(const nc_context* ctx);
NC_API uint64_t nc_context_grid_hash(const nc_context* ctx);
/* I(C;U) in bits: the accuracy ceiling. */
NC_API double nc_context_info_bound(const nc_context* ctx);

/* Reference languages (WCS or the synthetic fixtures). Loaded lazily. */
NC_API nc_status nc_reference_count(nc_context* ctx, size_t* count, int* fixtures);
NC_API nc_status nc_reference_system(nc_context* ctx, size_t index, nc_system** out);
NC_API const char* nc_reference_name(nc_context* ctx, size_t index);

/* ------------------------------------------------------------------------ */
/* IB frontier                                                              */

typedef struct nc_frontier_options {
  double beta_high;       /* default 8192 */
  int steps;              /* default 1500 */
  int geometric;          /* 0: beta-1 log-spaced down to min_offset (default); 1: beta log-spaced to 1 */
  double min_offset;      /* default 1e-3 */
  double tolerance;       /* default 1e-6 */
  int max_sweeps;         /* default 5000 */
  double merge_tolerance; /* default 1e-5 */
} nc_frontier_options;

NC_API void nc_frontier_options_init(nc_frontier_options* opts);
NC_API nc_status nc_frontier(nc_context* ctx, const nc_frontier_options* opts, nc_curve** out, int* cache_hit);
NC_API nc_status nc_curve_load(const char* path, nc_curve** out);
NC_API nc_status nc_curve_save(const nc_curve* curve, const char* path);
NC_API size_t nc_curve_size(const nc_curve* curve);
NC_API nc_status nc_curve_point(const nc_curve* curve, size_t index, double* beta, double* complexity,
                                double* accuracy);
NC_API void nc_curve_destroy(nc_curve* curve);

/* ------------------------------------------------------------------------ */
/* Naming systems                                                           */

NC_API nc_status nc_system_load(nc_context* ctx, const char* path, nc_system** out);
NC_API nc_status nc_system_save(const nc_system* sys, const char* path);
/* `probs` is row-major K x N (words by chips); each column must sum to 1. */
NC_API nc_status nc_system_from_matrix(nc_context* ctx, int num_words, const double* probs, nc_system** out);
NC_API int nc_system_num_words(const nc_system* sys);
NC_API double nc_system_prob(const nc_system* sys, int word, int chip);
NC_API void nc_system_destroy(nc_system* sys);

typedef struct nc_analysis {
  int num_words;
  double complexity; /* bits */
  double accuracy;   /* bits */
  double epsilon;
  double beta;       /* minimizing beta of epsilon */
  double min_gnid;   /* to the reference set */
  int neighbor;      /* closest reference index */
} nc_analysis;

NC_API nc_status nc_system_analyze(nc_context* ctx, const nc_system* sys, const nc_curve* curve, nc_analysis* out);
NC_API nc_status nc_gnid(nc_context* ctx, const nc_system* a, const nc_system* b, double* out);

/* Analysis table over system files, written as CSV. */
NC_API nc_status nc_analyze_files(nc_context* ctx, const nc_curve* curve, const char* const* paths, size_t count,
                                  const char* out_csv);
/* Analysis table over the reference languages. */
NC_API nc_status nc_analyze_references(nc_context* ctx, const nc_curve* curve, const char* out_csv);

/* ------------------------------------------------------------------------ */
/* Random model                                                             */

typedef struct nc_rm_options {
  int per_k;              /* default 100 */
  int k_min;              /* default 3 */
  int k_max;              /* default 10 */
  double complexity_low;  /* default 0.84 */
  double complexity_high; /* default 2.65 */
  double threshold;       /* gNID split between RM_s and RM_d; default 0.29 */
  uint64_t seed;
  int max_consecutive_rejections; /* default 5000 */
} nc_rm_options;

typedef struct nc_rm_summary {
  size_t count;
  double dissimilar_fraction;
  double median_epsilon;
  double dissimilar_complexity_min;
  double dissimilar_complexity_max;
} nc_rm_summary;

NC_API void nc_rm_options_init(nc_rm_options* opts);
NC_API nc_status nc_rm_generate(nc_context* ctx, const nc_curve* curve, const nc_rm_options* opts,
                                const char* manifest_csv, nc_rm_summary* summary);
/* Number of RM_d systems in a manifest, and access to the i-th one. */
NC_API nc_status nc_rm_dissimilar(nc_context* ctx, const char* manifest_csv, size_t index, nc_system** out,
                                  size_t* count);

/* ------------------------------------------------------------------------ */
/* Neural iterated learning                                                 */

typedef struct nc_game_options {
  int num_words;                 /* K; default 3 */
  nc_variant variant;            /* default IL+C */
  double reward_sigma_sq;        /* default 500 */
  int steps_per_phase;           /* default 1000 */
  int listener_steps;            /* default 1000 */
  int batch;                     /* default 50 */
  double learning_rate;          /* default 0.005 */
  int hidden;                    /* default 25 */
  double input_scale;            /* default 0.1 */
  int reinforce_baseline;        /* default 1 */
  int dataset_size;              /* default 300 */
  int argmax_transmission;       /* default 0 */
  int transmission_with_replacement; /* default 0 */
  int max_generations;           /* default 200 */
  int convergence_window;        /* default 10 */
  double convergence_tolerance;  /* bits; default 0.1 */
} nc_game_options;

typedef struct nc_chain_summary {
  int generations;
  int converged;
  double complexity;
  double accuracy;
  double epsilon;
  double min_gnid;
  int neighbor;
  double initial_min_gnid; /* NaN unless started from a system */
  double initial_epsilon;  /* NaN unless started from a system */
} nc_chain_summary;

NC_API void nc_game_options_init(nc_game_options* opts);
NC_API const char* nc_variant_name(nc_variant variant);
NC_API nc_status nc_parse_variant(const char* text, nc_variant* out);

/* One chain. `init` NULL starts from a uniformly random dataset; otherwise
 * the first dataset is sampled from `init` and K is taken from it. Output
 * paths may be NULL. */
NC_API nc_status nc_run_chain(nc_context* ctx, const nc_curve* curve, const nc_game_options* opts,
                              const nc_system* init, uint64_t seed, const char* trajectory_csv,
                              const char* system_out, nc_chain_summary* summary);

typedef struct nc_experiment_options {
  const int* ks;
  size_t num_ks;
  const nc_variant* variants;
  size_t num_variants;
  int seeds_per_cell;             /* default 10 */
  uint64_t seed;
  const char* rm_manifest;        /* non-NULL: start seed i from the i-th RM_d system */
  const char* table_csv;          /* resumable output; required */
  const char* trajectory_dir;     /* NULL: no per-chain files */
  int threads;                    /* 0: context default */
} nc_experiment_options;

NC_API void nc_experiment_options_init(nc_experiment_options* opts);
NC_API nc_status nc_run_experiment(nc_context* ctx, const nc_curve* curve, const nc_game_options* game,
                                   const nc_experiment_options* opts, size_t* rows);

/* ------------------------------------------------------------------------ */
/* Statistics                                                               */

typedef struct nc_test_result {
  double statistic;
  double p_value;
  int n;
  int m;
  int exact;
} nc_test_result;

/* NC_LESS: x tends to be smaller than y. */
NC_API nc_status nc_mann_whitney(const double* x, size_t n, const double* y, size_t m, nc_alternative alt,
                                 nc_test_result* out);
/* Paired test on x - y. NC_GREATER: x tends to exceed y. */
NC_API nc_status nc_wilcoxon(const double* x, const double* y, size_t n, nc_alternative alt,
                             nc_test_result* out);
NC_API nc_status nc_bonferroni(const double* p_values, size_t k, double alpha, double* adjusted, int* reject);

/* ------------------------------------------------------------------------ */
/* Rendering                                                                */

/* 10 x 41 colour-map mosaic. Either path may be NULL. */
NC_API nc_status nc_render_map(nc_context* ctx, const nc_system* sys, const char* svg_path, const char* csv_path,
                               const char* title);

typedef struct nc_series {
  const char* label;
  const char* color;
  const double* complexity;
  const double* accuracy;
  size_t count;
  char marker; /* 'o', '+', '^' */
} nc_series;

NC_API nc_status nc_render_ib_plane(nc_context* ctx, const nc_curve* curve, const nc_series* series, size_t count,
                                    const char* svg_path);

typedef struct nc_histogram {
  const char* label;
  const char* color;
  const double* values;
  size_t count;
} nc_histogram;

NC_API nc_status nc_render_histogram(const nc_histogram* groups, size_t count, double lo, double hi, int bins,
                                     const char* x_label, const char* svg_path);
NC_API nc_status nc_render_before_after(const double* before, const double* after, size_t count,
                                        const char* y_label, const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif /* NILCOLOR_NILCOLOR_H */

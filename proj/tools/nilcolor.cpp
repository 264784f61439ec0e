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

// nilcolor command-line interface. Links only the C API.

#include <nilcolor/nilcolor.h>

#include "CLI11.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitDataMissing = 2;
constexpr int kExitNumerical = 3;

struct CliError {
  int code;
  std::string message;
};

int exit_code_of(nc_status s) {
  switch (s) {
    case NC_OK: return kExitOk;
    case NC_ERR_DATA_MISSING: return kExitDataMissing;
    case NC_ERR_NUMERICAL:
    case NC_ERR_INTERNAL: return kExitNumerical;
    default: return kExitValidation;
  }
}

void check(nc_status s) {
  if (s != NC_OK) throw CliError{exit_code_of(s), nc_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw CliError{kExitValidation, msg}; }

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Context = std::unique_ptr<nc_context, Deleter<nc_context, nc_context_destroy>>;
using Curve = std::unique_ptr<nc_curve, Deleter<nc_curve, nc_curve_destroy>>;
using System = std::unique_ptr<nc_system, Deleter<nc_system, nc_system_destroy>>;

// ---------------------------------------------------------------------------
// Options

struct Global {
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<std::string> data;
  std::optional<std::string> chips;
  std::optional<std::string> prior;
  bool renormalize_prior = false;
  bool require_wcs = false;
  double sigma_sq = 64.0;
  std::optional<std::string> cache;
  int threads = 0;
  nc_frontier_options frontier{};
};

struct Game {
  nc_game_options opts{};
  std::string variant = "IL+C";
  Game() { nc_game_options_init(&opts); }
};

void add_game_options(CLI::App* cmd, Game& g, bool with_variant) {
  nc_game_options& o = g.opts;
  if (with_variant) cmd->add_option("--variant", g.variant, "IL+C, IL or C")->capture_default_str();
  cmd->add_option("--reward-sigma-sq", o.reward_sigma_sq, "Reward width: r = exp(-d^2 / (2 s))")
      ->capture_default_str();
  cmd->add_option("--steps", o.steps_per_phase, "Gradient steps per phase")->capture_default_str();
  cmd->add_option("--listener-steps", o.listener_steps, "Listener-only rounds in the learning phase")
      ->capture_default_str();
  cmd->add_option("--batch", o.batch, "Batch size")->capture_default_str();
  cmd->add_option("--lr", o.learning_rate, "Adam learning rate")->capture_default_str();
  cmd->add_option("--hidden", o.hidden, "Hidden sigmoid units")->capture_default_str();
  cmd->add_option("--input-scale", o.input_scale, "CIELAB input scaling for the speaker")->capture_default_str();
  cmd->add_option("--baseline", o.reinforce_baseline, "Batch-mean reward baseline for REINFORCE (0/1)")
      ->capture_default_str();
  cmd->add_option("--dataset-size", o.dataset_size, "Transmitted colour-name pairs")->capture_default_str();
  cmd->add_option("--argmax-transmission", o.argmax_transmission, "Transmit the speaker's modal word (0/1)")
      ->capture_default_str();
  cmd->add_option("--with-replacement", o.transmission_with_replacement,
                  "Sample transmission chips with replacement (0/1)")
      ->capture_default_str();
  cmd->add_option("--max-generations", o.max_generations, "Generation cap")->capture_default_str();
  cmd->add_option("--window", o.convergence_window, "Generations in the stopping window")->capture_default_str();
  cmd->add_option("--tolerance", o.convergence_tolerance, "Stopping spread in bits")->capture_default_str();
}

void finalize_game(Game& g) { check(nc_parse_variant(g.variant.c_str(), &g.opts.variant)); }

Context open_context(const Global& gl) {
  nc_context_options o;
  nc_context_options_init(&o);
  o.chips_path = gl.chips ? gl.chips->c_str() : nullptr;
  o.prior_path = gl.prior ? gl.prior->c_str() : nullptr;
  o.renormalize_prior = gl.renormalize_prior;
  o.sigma_sq = gl.sigma_sq;
  o.data_dir = gl.data ? gl.data->c_str() : nullptr;
  o.require_wcs = gl.require_wcs;
  const std::string cache = gl.cache.value_or((fs::path(gl.out) / "cache").string());
  o.cache_dir = cache.c_str();
  o.threads = gl.threads;
  nc_context* ctx = nullptr;
  check(nc_context_create(&o, &ctx));
  return Context(ctx);
}

Curve frontier(nc_context* ctx, const Global& gl, bool* hit = nullptr) {
  nc_curve* c = nullptr;
  int h = 0;
  check(nc_frontier(ctx, &gl.frontier, &c, &h));
  if (hit) *hit = h != 0;
  return Curve(c);
}

std::string out_path(const Global& gl, const std::string& name) {
  fs::create_directories(gl.out);
  return (fs::path(gl.out) / name).string();
}

std::uint64_t require_seed(const Global& gl, const char* cmd) {
  if (!gl.seed) usage_error(std::string(cmd) + " requires --seed");
  return *gl.seed;
}

// ---------------------------------------------------------------------------
// Small CSV reader for the tables this tool writes.

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    usage_error("column '" + name + "' not found");
  }
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitDataMissing, "cannot read " + path};
  Table t;
  std::string line;
  if (!std::getline(in, line)) usage_error(path + ": empty table");
  t.header = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() == t.header.size()) t.rows.push_back(std::move(f));
  }
  return t;
}

double to_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    return std::nan("");
  }
}

// "file:column" with optional filters "col=value,col2=value".
std::vector<double> select_column(const std::string& spec, const std::string& where) {
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos) usage_error("expected FILE:COLUMN, got '" + spec + "'");
  const Table t = read_table(spec.substr(0, colon));
  const int col = t.column(spec.substr(colon + 1));
  std::vector<std::pair<int, std::string>> filters;
  for (const std::string& f : split(where, ',')) {
    if (f.empty()) continue;
    const auto eq = f.find('=');
    if (eq == std::string::npos) usage_error("filter must be COLUMN=VALUE: '" + f + "'");
    filters.emplace_back(t.column(f.substr(0, eq)), f.substr(eq + 1));
  }
  std::vector<double> out;
  for (const auto& row : t.rows) {
    bool keep = true;
    for (const auto& [c, v] : filters) keep = keep && row[c] == v;
    if (!keep) continue;
    const double x = to_double(row[col]);
    if (std::isfinite(x)) out.push_back(x);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const std::string& tok : split(s, ',')) {
    if (tok.empty()) continue;
    const auto dash = tok.find('-');
    try {
      if (dash != std::string::npos && dash > 0) {
        const int lo = std::stoi(tok.substr(0, dash)), hi = std::stoi(tok.substr(dash + 1));
        for (int k = lo; k <= hi; ++k) out.push_back(k);
      } else {
        out.push_back(std::stoi(tok));
      }
    } catch (const std::exception&) {
      usage_error("bad integer list '" + s + "'");
    }
  }
  return out;
}

struct PointsCsv {
  std::vector<double> cx, acc;
};

PointsCsv points_of(const std::string& path, const std::string& where) {
  return {select_column(path + ":complexity", where), select_column(path + ":accuracy", where)};
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_frontier(const Global& gl) {
  Context ctx = open_context(gl);
  bool hit = false;
  Curve curve = frontier(ctx.get(), gl, &hit);
  const std::string csv = out_path(gl, "frontier.csv");
  check(nc_curve_save(curve.get(), csv.c_str()));
  check(nc_render_ib_plane(ctx.get(), curve.get(), nullptr, 0, out_path(gl, "frontier.svg").c_str()));
  std::printf("frontier: %zu points (%s) -> %s\n", nc_curve_size(curve.get()), hit ? "cached" : "computed",
              csv.c_str());
  return kExitOk;
}

struct AnalyzeArgs {
  std::vector<std::string> files;
  bool references = false;
  std::string name = "analysis.csv";
};

int cmd_analyze(const Global& gl, const AnalyzeArgs& a) {
  if (a.files.empty() && !a.references) usage_error("analyze needs system files or --references");
  Context ctx = open_context(gl);
  size_t n = 0;
  int fixtures = 0;
  // Resolves the reference data before the (slow) frontier.
  if (a.references) check(nc_reference_count(ctx.get(), &n, &fixtures));
  Curve curve = frontier(ctx.get(), gl);
  std::vector<nc_series> series;
  PointsCsv refs, sys;
  if (a.references) {
    const std::string path = out_path(gl, "references.csv");
    check(nc_analyze_references(ctx.get(), curve.get(), path.c_str()));
    refs = points_of(path, "");
    series.push_back({"reference", "#ee7733", refs.cx.data(), refs.acc.data(), refs.cx.size(), 'o'});
    std::printf("references: %zu languages (%s) -> %s\n", n, fixtures ? "synthetic fixtures" : "WCS", path.c_str());
  }
  if (!a.files.empty()) {
    std::vector<const char*> paths;
    for (const auto& f : a.files) paths.push_back(f.c_str());
    const std::string path = out_path(gl, a.name);
    check(nc_analyze_files(ctx.get(), curve.get(), paths.data(), paths.size(), path.c_str()));
    sys = points_of(path, "");
    series.push_back({"systems", "#0077bb", sys.cx.data(), sys.acc.data(), sys.cx.size(), 'o'});
    std::printf("analyzed %zu systems -> %s\n", a.files.size(), path.c_str());
  }
  check(nc_render_ib_plane(ctx.get(), curve.get(), series.data(), series.size(),
                           out_path(gl, "analysis_ib_plane.svg").c_str()));
  return kExitOk;
}

int cmd_rm_gen(const Global& gl, nc_rm_options opts) {
  opts.seed = require_seed(gl, "rm-gen");
  Context ctx = open_context(gl);
  Curve curve = frontier(ctx.get(), gl);
  const std::string manifest = out_path(gl, "rm_manifest.csv");
  nc_rm_summary s{};
  check(nc_rm_generate(ctx.get(), curve.get(), &opts, manifest.c_str(), &s));
  std::printf("RM systems: %zu\nRM_d fraction: %.4f\nRM_d complexity range: [%.3f, %.3f]\nmedian epsilon: %.4f\n",
              s.count, s.dissimilar_fraction, s.dissimilar_complexity_min, s.dissimilar_complexity_max,
              s.median_epsilon);
  const std::string refs = out_path(gl, "references.csv");
  check(nc_analyze_references(ctx.get(), curve.get(), refs.c_str()));
  const PointsCsv w = points_of(refs, "");
  const PointsCsv rs = points_of(manifest, "label=RM_s");
  const PointsCsv rd = points_of(manifest, "label=RM_d");
  const nc_series series[] = {{"reference", "#ee7733", w.cx.data(), w.acc.data(), w.cx.size(), 'o'},
                              {"RM_s", "#0077bb", rs.cx.data(), rs.acc.data(), rs.cx.size(), 'o'},
                              {"RM_d", "#009988", rd.cx.data(), rd.acc.data(), rd.cx.size(), '+'}};
  check(nc_render_ib_plane(ctx.get(), curve.get(), series, 3, out_path(gl, "rm_ib_plane.svg").c_str()));
  std::printf("manifest -> %s\n", manifest.c_str());
  return kExitOk;
}

struct RunArgs {
  std::string init = "random";  // random | rm-d | <system file>
  std::string manifest;
  int rm_index = 0;
  std::string tag = "chain";
};

int cmd_run(const Global& gl, Game& g, const RunArgs& a) {
  finalize_game(g);
  const std::uint64_t seed = require_seed(gl, "run");
  Context ctx = open_context(gl);
  Curve curve = frontier(ctx.get(), gl);
  System init;
  if (a.init == "rm-d") {
    if (a.manifest.empty()) usage_error("--init rm-d needs --rm-manifest");
    nc_system* s = nullptr;
    check(nc_rm_dissimilar(ctx.get(), a.manifest.c_str(), static_cast<size_t>(a.rm_index), &s, nullptr));
    init.reset(s);
  } else if (a.init != "random") {
    nc_system* s = nullptr;
    check(nc_system_load(ctx.get(), a.init.c_str(), &s));
    init.reset(s);
  }
  nc_chain_summary sum{};
  const std::string traj = out_path(gl, a.tag + "_trajectory.csv");
  const std::string final_sys = out_path(gl, a.tag + "_final.tsv");
  check(nc_run_chain(ctx.get(), curve.get(), &g.opts, init.get(), seed, traj.c_str(), final_sys.c_str(), &sum));
  System fin;
  {
    nc_system* s = nullptr;
    check(nc_system_load(ctx.get(), final_sys.c_str(), &s));
    fin.reset(s);
  }
  check(nc_render_map(ctx.get(), fin.get(), out_path(gl, a.tag + "_final_map.svg").c_str(), nullptr,
                      nc_variant_name(g.opts.variant)));
  if (init) {
    check(nc_render_map(ctx.get(), init.get(), out_path(gl, a.tag + "_initial_map.svg").c_str(), nullptr,
                        "initial"));
  }
  std::printf("variant %s  generations %d  converged %d\n", nc_variant_name(g.opts.variant), sum.generations,
              sum.converged);
  std::printf("complexity %.4f  accuracy %.4f  epsilon %.4f  min gNID %.4f (reference %d)\n", sum.complexity,
              sum.accuracy, sum.epsilon, sum.min_gnid, sum.neighbor);
  if (init) std::printf("initial: epsilon %.4f  min gNID %.4f\n", sum.initial_epsilon, sum.initial_min_gnid);
  return kExitOk;
}

struct ExperimentArgs {
  std::string ks = "3,5,7,10";
  std::string variants = "IL+C";
  int seeds = 10;
  std::string init = "random";  // random | rm-d
  std::string manifest;
  std::string table = "experiment.csv";
  bool trajectories = false;
};

int cmd_experiment(const Global& gl, Game& g, const ExperimentArgs& a) {
  finalize_game(g);
  const std::uint64_t seed = require_seed(gl, "experiment");
  const std::vector<int> ks = parse_int_list(a.ks);
  std::vector<nc_variant> variants;
  for (const std::string& v : split(a.variants, ',')) {
    if (v.empty()) continue;
    nc_variant x;
    check(nc_parse_variant(v.c_str(), &x));
    variants.push_back(x);
  }
  Context ctx = open_context(gl);
  Curve curve = frontier(ctx.get(), gl);
  nc_experiment_options o;
  nc_experiment_options_init(&o);
  o.ks = ks.data();
  o.num_ks = ks.size();
  o.variants = variants.data();
  o.num_variants = variants.size();
  o.seeds_per_cell = a.seeds;
  o.seed = seed;
  if (a.init == "rm-d") {
    if (a.manifest.empty()) usage_error("--init rm-d needs --rm-manifest");
    o.rm_manifest = a.manifest.c_str();
  } else if (a.init != "random") {
    usage_error("--init must be random or rm-d");
  }
  const std::string table = out_path(gl, a.table);
  o.table_csv = table.c_str();
  const std::string traj = out_path(gl, "trajectories");
  if (a.trajectories) o.trajectory_dir = traj.c_str();
  o.threads = gl.threads;
  size_t rows = 0;
  check(nc_run_experiment(ctx.get(), curve.get(), &g.opts, &o, &rows));

  // Per-variant summary.
  for (nc_variant v : variants) {
    const std::string where = std::string("variant=") + nc_variant_name(v);
    const auto cx = select_column(table + ":complexity", where);
    const auto eps = select_column(table + ":epsilon", where);
    const auto gn = select_column(table + ":min_gnid", where);
    const auto conv = select_column(table + ":converged", where);
    std::printf("%-5s n=%zu converged=%.0f%%  complexity mean %.3f  epsilon median %.3f mean %.3f  gNID mean %.3f\n",
                nc_variant_name(v), cx.size(), 100.0 * mean(conv), mean(cx), median(eps), mean(eps), mean(gn));
  }
  std::printf("%zu rows -> %s\n", rows, table.c_str());
  return kExitOk;
}

struct StatsArgs {
  std::string x, y, x_where, y_where;
  std::string test = "mwu";
  std::string alternative = "less";
  int bonferroni = 1;
  double alpha = 0.05;
};

int cmd_stats(const StatsArgs& a) {
  const std::vector<double> x = select_column(a.x, a.x_where);
  const std::vector<double> y = select_column(a.y, a.y_where);
  nc_alternative alt = NC_LESS;
  if (a.alternative == "greater") {
    alt = NC_GREATER;
  } else if (a.alternative == "two-sided") {
    alt = NC_TWO_SIDED;
  } else if (a.alternative != "less") {
    usage_error("--alternative must be less, greater or two-sided");
  }
  nc_test_result r{};
  if (a.test == "mwu") {
    check(nc_mann_whitney(x.data(), x.size(), y.data(), y.size(), alt, &r));
    std::printf("Mann-Whitney U = %.6g  n = %d  m = %d\n", r.statistic, r.n, r.m);
  } else if (a.test == "wilcoxon") {
    if (x.size() != y.size()) usage_error("paired test needs equal sample sizes");
    check(nc_wilcoxon(x.data(), y.data(), x.size(), alt, &r));
    std::printf("Wilcoxon T = %.6g  n = %d (non-zero pairs)\n", r.statistic, r.n);
  } else {
    usage_error("--test must be mwu or wilcoxon");
  }
  std::printf("median x %.6g  median y %.6g\n", median(x), median(y));
  std::printf("p = %.6g (%s, %s)\n", r.p_value, r.exact ? "exact" : "normal approximation", a.alternative.c_str());
  if (a.bonferroni > 1) {
    std::vector<double> p(static_cast<std::size_t>(a.bonferroni), 1.0), adj(p.size());
    std::vector<int> rej(p.size());
    p[0] = r.p_value;
    check(nc_bonferroni(p.data(), p.size(), a.alpha, adj.data(), rej.data()));
    std::printf("Bonferroni (k = %d): p = %.6g, reject at %.3g: %s\n", a.bonferroni, adj[0], a.alpha,
                rej[0] ? "yes" : "no");
  }
  return kExitOk;
}

struct RenderArgs {
  std::vector<std::string> systems;
  std::string experiment;
  std::string manifest;
  std::string before_after;  // experiment table from an rm-d run
};

int cmd_render(const Global& gl, const RenderArgs& a) {
  if (a.systems.empty() && a.experiment.empty() && a.before_after.empty()) {
    usage_error("render needs --system, --experiment or --before-after");
  }
  Context ctx = open_context(gl);
  for (const std::string& path : a.systems) {
    nc_system* s = nullptr;
    check(nc_system_load(ctx.get(), path.c_str(), &s));
    System sys(s);
    const std::string stem = fs::path(path).stem().string();
    check(nc_render_map(ctx.get(), sys.get(), out_path(gl, stem + "_map.svg").c_str(),
                        out_path(gl, stem + "_map.csv").c_str(), stem.c_str()));
    std::printf("map -> %s\n", out_path(gl, stem + "_map.svg").c_str());
  }
  if (!a.experiment.empty()) {
    Curve curve = frontier(ctx.get(), gl);
    const char* colors[] = {"#cc3311", "#0077bb", "#009988"};
    std::vector<PointsCsv> pts;
    std::vector<std::string> labels;
    for (const char* v : {"IL+C", "IL", "C"}) {
      PointsCsv p = points_of(a.experiment, std::string("variant=") + v);
      if (p.cx.empty()) continue;
      pts.push_back(std::move(p));
      labels.emplace_back(v);
    }
    std::vector<nc_series> series;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      series.push_back({labels[i].c_str(), colors[i % 3], pts[i].cx.data(), pts[i].acc.data(), pts[i].cx.size(), 'o'});
    }
    check(nc_render_ib_plane(ctx.get(), curve.get(), series.data(), series.size(),
                             out_path(gl, "experiment_ib_plane.svg").c_str()));
    std::vector<std::vector<double>> values;
    for (const std::string& l : labels) values.push_back(select_column(a.experiment + ":min_gnid", "variant=" + l));
    std::vector<nc_histogram> groups;
    std::vector<double> rm;
    if (!a.manifest.empty()) rm = select_column(a.manifest + ":min_gnid", "");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      groups.push_back({labels[i].c_str(), colors[i % 3], values[i].data(), values[i].size()});
    }
    if (!rm.empty()) groups.push_back({"RM", "#777777", rm.data(), rm.size()});
    check(nc_render_histogram(groups.data(), groups.size(), 0.0, 1.0, 20, "min gNID to reference set",
                              out_path(gl, "gnid_histogram.svg").c_str()));
    std::printf("plots -> %s\n", gl.out.c_str());
  }
  if (!a.before_after.empty()) {
    if (a.manifest.empty()) usage_error("--before-after needs --rm-manifest");
    // Seed i of an rm-d experiment started from the i-th RM_d row of the manifest.
    const std::vector<double> before_all = select_column(a.manifest + ":min_gnid", "label=RM_d");
    const Table t = read_table(a.before_after);
    const int seed_col = t.column("seed"), g_col = t.column("min_gnid");
    std::vector<double> before, after;
    for (const auto& row : t.rows) {
      const int s = std::stoi(row[seed_col]);
      const double g = to_double(row[g_col]);
      if (s < 0 || s >= static_cast<int>(before_all.size()) || !std::isfinite(g)) continue;
      before.push_back(before_all[static_cast<std::size_t>(s)]);
      after.push_back(g);
    }
    check(nc_render_before_after(before.data(), after.data(), before.size(), "min gNID to reference set",
                                 out_path(gl, "before_after.svg").c_str()));
    std::printf("before/after (%zu pairs): mean %.3f -> %.3f\n", before.size(), mean(before), mean(after));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nilcolor: colour naming, information bottleneck efficiency and neural iterated learning"};
  app.set_version_flag("--version", std::string(nc_version()));
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file (keys are long option names)");

  Global gl;
  nc_frontier_options_init(&gl.frontier);
  app.add_option("--seed", gl.seed, "Root random seed (required by rm-gen, run, experiment)");
  app.add_option("--out", gl.out, "Output directory")->capture_default_str();
  app.add_option("--data", gl.data, "WCS data directory (term.txt, dict.txt, chip_ids.tsv); synthetic fixtures if absent");
  app.add_option("--chips", gl.chips, "Chip table (index row col L a b); bundled 330-chip table if absent");
  app.add_option("--prior", gl.prior, "Chip prior (one probability per line); uniform if absent");
  app.add_flag("--renormalize-prior", gl.renormalize_prior, "Renormalize a prior that does not sum to 1");
  app.add_flag("--require-wcs", gl.require_wcs, "Exit 2 instead of falling back to fixtures when WCS data is absent");
  app.add_option("--sigma-sq", gl.sigma_sq, "Meaning-model width (CIELAB distance squared)")->capture_default_str();
  app.add_option("--cache", gl.cache, "Frontier cache directory [default: <out>/cache]");
  app.add_option("--threads", gl.threads, "Worker threads, 0 = all cores")->capture_default_str();
  app.add_option("--beta-high", gl.frontier.beta_high, "Largest beta of the annealing schedule")->capture_default_str();
  app.add_option("--beta-steps", gl.frontier.steps, "Number of betas")->capture_default_str();
  app.add_option("--beta-min-offset", gl.frontier.min_offset, "Smallest beta - 1 before beta = 1")
      ->capture_default_str();
  app.add_option("--geometric-betas", gl.frontier.geometric, "1: log-spaced beta down to 1 instead")
      ->capture_default_str();
  app.add_option("--ib-tolerance", gl.frontier.tolerance, "Per-beta convergence on the IB objective")
      ->capture_default_str();
  app.add_option("--ib-max-sweeps", gl.frontier.max_sweeps, "Sweep cap per beta")->capture_default_str();
  app.add_option("--merge-tolerance", gl.frontier.merge_tolerance, "Decoder distance below which words merge")
      ->capture_default_str();

  auto* frontier_cmd = app.add_subcommand("frontier", "Compute (or load from cache) the IB frontier");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Complexity, accuracy, epsilon and min gNID of naming systems");
  analyze_cmd->add_option("systems", analyze.files, "Naming-system TSV files");
  analyze_cmd->add_flag("--references", analyze.references, "Analyze the reference languages");
  analyze_cmd->add_option("--name", analyze.name, "Output table name")->capture_default_str();

  nc_rm_options rm;
  nc_rm_options_init(&rm);
  auto* rm_cmd = app.add_subcommand("rm-gen", "Generate random-model systems and split them into RM_s / RM_d");
  rm_cmd->add_option("--per-k", rm.per_k, "Accepted systems per K")->capture_default_str();
  rm_cmd->add_option("--k-min", rm.k_min, "Smallest K")->capture_default_str();
  rm_cmd->add_option("--k-max", rm.k_max, "Largest K")->capture_default_str();
  rm_cmd->add_option("--complexity-low", rm.complexity_low, "Lower complexity bound (bits)")->capture_default_str();
  rm_cmd->add_option("--complexity-high", rm.complexity_high, "Upper complexity bound (bits)")->capture_default_str();
  rm_cmd->add_option("--threshold", rm.threshold, "min gNID above which a system is RM_d")->capture_default_str();
  rm_cmd->add_option("--max-rejections", rm.max_consecutive_rejections, "Consecutive rejections before aborting")
      ->capture_default_str();

  Game run_game;
  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one neural iterated learning chain");
  run_cmd->add_option("-K,--K", run_game.opts.num_words, "Vocabulary size")->capture_default_str();
  add_game_options(run_cmd, run_game, true);
  run_cmd->add_option("--init", run.init, "random, rm-d, or a naming-system file")->capture_default_str();
  run_cmd->add_option("--rm-manifest", run.manifest, "Manifest from rm-gen (for --init rm-d)");
  run_cmd->add_option("--rm-index", run.rm_index, "Which RM_d system to start from")->capture_default_str();
  run_cmd->add_option("--tag", run.tag, "Output file prefix")->capture_default_str();

  Game exp_game;
  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run many chains over (variant, K, seed); resumable");
  add_game_options(exp_cmd, exp_game, false);
  exp_cmd->add_option("--K", exp.ks, "Vocabulary sizes, e.g. 3,5,7,10 or 3-10")->capture_default_str();
  exp_cmd->add_option("--variants", exp.variants, "Comma-separated variants")->capture_default_str();
  exp_cmd->add_option("--seeds", exp.seeds, "Seeds per cell (number of RM_d starts for --init rm-d)")
      ->capture_default_str();
  exp_cmd->add_option("--init", exp.init, "random or rm-d")->capture_default_str();
  exp_cmd->add_option("--rm-manifest", exp.manifest, "Manifest from rm-gen (for --init rm-d)");
  exp_cmd->add_option("--table", exp.table, "Result table name inside --out")->capture_default_str();
  exp_cmd->add_flag("--trajectories", exp.trajectories, "Write per-chain trajectories and final systems");

  StatsArgs st;
  auto* stats_cmd = app.add_subcommand("stats", "Rank tests between two table columns");
  stats_cmd->add_option("--x", st.x, "FILE:COLUMN of the first sample")->required();
  stats_cmd->add_option("--y", st.y, "FILE:COLUMN of the second sample")->required();
  stats_cmd->add_option("--x-where", st.x_where, "Row filter for x, e.g. variant=IL+C");
  stats_cmd->add_option("--y-where", st.y_where, "Row filter for y");
  stats_cmd->add_option("--test", st.test, "mwu (independent) or wilcoxon (paired)")->capture_default_str();
  stats_cmd->add_option("--alternative", st.alternative, "less, greater or two-sided")->capture_default_str();
  stats_cmd->add_option("--bonferroni", st.bonferroni, "Number of comparisons for correction")->capture_default_str();
  stats_cmd->add_option("--alpha", st.alpha, "Family-wise level")->capture_default_str();

  RenderArgs rd;
  auto* render_cmd = app.add_subcommand("render", "Colour-map mosaics and summary figures");
  render_cmd->add_option("--system", rd.systems, "Naming-system files to draw as mosaics");
  render_cmd->add_option("--experiment", rd.experiment, "Experiment table: IB-plane scatter and gNID histogram");
  render_cmd->add_option("--rm-manifest", rd.manifest, "RM manifest (histogram baseline, before/after pairing)");
  render_cmd->add_option("--before-after", rd.before_after, "Experiment table from an rm-d run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*frontier_cmd) return cmd_frontier(gl);
    if (*analyze_cmd) return cmd_analyze(gl, analyze);
    if (*rm_cmd) return cmd_rm_gen(gl, rm);
    if (*run_cmd) return cmd_run(gl, run_game, run);
    if (*exp_cmd) return cmd_experiment(gl, exp_game, exp);
    if (*stats_cmd) return cmd_stats(st);
    if (*render_cmd) return cmd_render(gl, rd);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}

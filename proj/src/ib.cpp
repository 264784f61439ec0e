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

#include "ib.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace nilcolor {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Mutual information (nats) of a nonnegative matrix, normalized by its total.
double mi_nats(const Eigen::MatrixXd& joint) {
  const double total = joint.sum();
  if (!(total > 0.0)) return 0.0;
  const Eigen::VectorXd pr = joint.rowwise().sum() / total;
  const Eigen::RowVectorXd pc = joint.colwise().sum() / total;
  double mi = 0.0;
  for (Eigen::Index j = 0; j < joint.cols(); ++j) {
    for (Eigen::Index i = 0; i < joint.rows(); ++i) {
      const double p = joint(i, j) / total;
      if (p > 0.0) mi += p * std::log(p / (pr[i] * pc[j]));
    }
  }
  return std::max(mi, 0.0);
}

void check_chips(const NamingSystem& sys, const ChipGrid& grid) {
  if (sys.num_chips() != grid.size()) {
    fail(ErrorKind::validation, "naming system has " + std::to_string(sys.num_chips()) +
                                    " chips, grid has " + std::to_string(grid.size()));
  }
}

// p(w,c) = q(w|c) p(c)
Eigen::MatrixXd word_chip_joint(const Eigen::MatrixXd& encoder, const Eigen::VectorXd& prior) {
  return encoder * prior.asDiagonal();
}

bool is_constant(const NamingSystem& sys) {
  const Eigen::MatrixXd& q = sys.encoder();
  for (Eigen::Index c = 1; c < q.cols(); ++c) {
    if ((q.col(c) - q.col(0)).cwiseAbs().maxCoeff() > 1e-12) return false;
  }
  return true;
}

// Deterministic initial partition for the annealing when fewer words than
// chips are allowed: farthest-point prototypes, nearest-prototype assignment.
Eigen::MatrixXd farthest_point_partition(const ChipGrid& grid, int k) {
  const int n = grid.size();
  std::vector<int> protos{0};
  std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  while (static_cast<int>(protos.size()) < k) {
    const Chip& last = grid.chip(protos.back());
    int best = 0;
    for (int c = 0; c < n; ++c) {
      nearest[c] = std::min(nearest[c], perceptual_distance_sq(grid.chip(c), last));
      if (nearest[c] > nearest[best]) best = c;
    }
    protos.push_back(best);
  }
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(k, n);
  for (int c = 0; c < n; ++c) {
    int arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int w = 0; w < k; ++w) {
      const double d = perceptual_distance_sq(grid.chip(c), grid.chip(protos[w]));
      if (d < best) {
        best = d;
        arg = w;
      }
    }
    q(arg, c) = 1.0;
  }
  return q;
}

struct Sweep {
  Eigen::VectorXd word_marginal;  // q(w)
  Eigen::MatrixXd decoder;        // m_hat_w(u), K x N
  double complexity = 0.0;        // nats
  double accuracy = 0.0;          // nats
};

// Decoder and IB terms for the current encoder.
Sweep evaluate_encoder(const Eigen::MatrixXd& q, const Eigen::VectorXd& prior,
                       const Eigen::MatrixXd& m, const Eigen::RowVectorXd& meaning_marginal) {
  Sweep s;
  const Eigen::MatrixXd joint = word_chip_joint(q, prior);
  s.word_marginal = joint.rowwise().sum();
  s.decoder = joint * m;
  for (Eigen::Index w = 0; w < q.rows(); ++w) {
    if (s.word_marginal[w] > 0.0) s.decoder.row(w) /= s.word_marginal[w];
  }
  double ix = 0.0;
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    for (Eigen::Index w = 0; w < q.rows(); ++w) {
      const double p = joint(w, c);
      if (p > 0.0) ix += p * std::log(q(w, c) / s.word_marginal[w]);
    }
  }
  double iy = 0.0;
  for (Eigen::Index w = 0; w < q.rows(); ++w) {
    if (!(s.word_marginal[w] > 0.0)) continue;
    double kl = 0.0;
    for (Eigen::Index u = 0; u < s.decoder.cols(); ++u) {
      const double d = s.decoder(w, u);
      if (d > 0.0) kl += d * std::log(d / meaning_marginal[u]);
    }
    iy += s.word_marginal[w] * kl;
  }
  s.complexity = std::max(ix, 0.0);
  s.accuracy = std::max(iy, 0.0);
  return s;
}

// Drops dead words and merges words with (numerically) identical decoders.
void compact_words(Eigen::MatrixXd& q, const Sweep& s, double merge_tol) {
  const Eigen::Index k = q.rows();
  std::vector<Eigen::Index> target(static_cast<std::size_t>(k), -1);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index w = 0; w < k; ++w) {
    if (s.word_marginal[w] < 1e-15) continue;
    Eigen::Index into = -1;
    for (Eigen::Index v : kept) {
      if ((s.decoder.row(w) - s.decoder.row(v)).cwiseAbs().maxCoeff() < merge_tol) {
        into = v;
        break;
      }
    }
    if (into < 0) kept.push_back(w);
    target[w] = into < 0 ? w : into;
  }
  if (static_cast<Eigen::Index>(kept.size()) == k) return;
  Eigen::MatrixXd merged = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kept.size()), q.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (Eigen::Index w = 0; w < k; ++w) {
      if (target[w] == kept[i]) merged.row(static_cast<Eigen::Index>(i)) += q.row(w);
    }
  }
  for (Eigen::Index c = 0; c < merged.cols(); ++c) merged.col(c) /= merged.col(c).sum();
  q = std::move(merged);
}

}  // namespace

double mutual_information(const Eigen::MatrixXd& joint) {
  if (joint.size() == 0) fail(ErrorKind::validation, "empty joint distribution");
  if (!joint.allFinite() || (joint.array() < 0.0).any()) {
    fail(ErrorKind::validation, "joint distribution has negative or non-finite entries");
  }
  if (std::abs(joint.sum() - 1.0) > 1e-9) {
    fail(ErrorKind::validation, "joint distribution does not sum to 1");
  }
  return mi_nats(joint) / kLn2;
}

double complexity(const NamingSystem& sys, const ChipGrid& grid) {
  check_chips(sys, grid);
  return mi_nats(word_chip_joint(sys.encoder(), grid.prior())) / kLn2;
}

double accuracy(const NamingSystem& sys, const ChipGrid& grid, const MeaningModel& mm) {
  check_chips(sys, grid);
  if (mm.size() != grid.size()) fail(ErrorKind::validation, "meaning model does not match grid");
  // p(w,u) = sum_c p(c) q(w|c) m_c(u)
  return mi_nats(word_chip_joint(sys.encoder(), grid.prior()) * mm.likelihood()) / kLn2;
}

IBPoint evaluate(const NamingSystem& sys, const ChipGrid& grid, const MeaningModel& mm) {
  IBPoint p;
  p.complexity = complexity(sys, grid);
  p.accuracy = accuracy(sys, grid, mm);
  return p;
}

double meaning_information(const ChipGrid& grid, const MeaningModel& mm) {
  return mi_nats(grid.prior().asDiagonal() * mm.likelihood()) / kLn2;
}

namespace {

std::vector<double> geometric_descent(double high, double low, int steps) {
  if (steps == 1) return {high};
  std::vector<double> betas(static_cast<std::size_t>(steps));
  const double ratio = std::log(low / high) / (steps - 1);
  for (int i = 0; i < steps; ++i) betas[i] = high * std::exp(ratio * i);
  betas.front() = high;
  betas.back() = low;
  return betas;
}

}  // namespace

std::vector<double> geometric_beta_schedule(double high, double low, int steps) {
  if (!(high >= low) || !(low >= 1.0) || steps < 1) {
    fail(ErrorKind::validation, "beta schedule needs high >= low >= 1 and steps >= 1");
  }
  return geometric_descent(high, low, steps);
}

std::vector<double> annealing_beta_schedule(double high, int steps, double min_offset) {
  if (!(high > 1.0) || steps < 2 || !(min_offset > 0.0) || !(min_offset < high - 1.0)) {
    fail(ErrorKind::validation, "annealing schedule needs high > 1 + min_offset and steps >= 2");
  }
  std::vector<double> betas = geometric_descent(high - 1.0, min_offset, steps - 1);
  for (double& b : betas) b += 1.0;
  betas.push_back(1.0);
  return betas;
}

IBCurve ib_frontier(const ChipGrid& grid, const MeaningModel& mm, const FrontierOptions& opts) {
  const int n = grid.size();
  if (mm.size() != n) fail(ErrorKind::validation, "meaning model does not match grid");
  if (opts.betas.empty()) fail(ErrorKind::validation, "empty beta schedule");
  for (std::size_t i = 0; i < opts.betas.size(); ++i) {
    if (!(opts.betas[i] >= 1.0) || (i > 0 && opts.betas[i] > opts.betas[i - 1])) {
      fail(ErrorKind::validation, "beta schedule must be descending and >= 1");
    }
  }
  if (opts.max_words < 1) fail(ErrorKind::validation, "max_words must be positive");

  const Eigen::MatrixXd& m = mm.likelihood();
  const Eigen::VectorXd& prior = grid.prior();
  const Eigen::RowVectorXd meaning_marginal = prior.transpose() * m;
  Eigen::VectorXd neg_entropy(n);  // sum_u m_c(u) ln m_c(u)
  for (int c = 0; c < n; ++c) {
    double h = 0.0;
    for (int u = 0; u < n; ++u) {
      if (m(c, u) > 0.0) h += m(c, u) * std::log(m(c, u));
    }
    neg_entropy[c] = h;
  }

  Eigen::MatrixXd q = opts.max_words >= n ? Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n))
                                          : farthest_point_partition(grid, opts.max_words);
  IBCurve curve;
  for (double beta : opts.betas) {
    Sweep s = evaluate_encoder(q, prior, m, meaning_marginal);
    double objective = s.complexity - beta * s.accuracy;
    bool converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      const Eigen::MatrixXd log_decoder = s.decoder.array().max(1e-300).log().matrix();
      // cross(c,w) = sum_u m_c(u) ln m_hat_w(u)
      const Eigen::MatrixXd cross = m * log_decoder.transpose();
      Eigen::MatrixXd next(q.rows(), n);
      for (int c = 0; c < n; ++c) {
        double top = -std::numeric_limits<double>::infinity();
        for (Eigen::Index w = 0; w < q.rows(); ++w) {
          const double kl = neg_entropy[c] - cross(c, w);
          const double v = s.word_marginal[w] > 0.0
                               ? std::log(s.word_marginal[w]) - beta * kl
                               : -std::numeric_limits<double>::infinity();
          next(w, c) = v;
          top = std::max(top, v);
        }
        double z = 0.0;
        for (Eigen::Index w = 0; w < q.rows(); ++w) {
          next(w, c) = std::exp(next(w, c) - top);
          z += next(w, c);
        }
        next.col(c) /= z;
      }
      q = std::move(next);
      s = evaluate_encoder(q, prior, m, meaning_marginal);
      const double updated = s.complexity - beta * s.accuracy;
      if (!std::isfinite(updated)) fail(ErrorKind::numerical, "non-finite IB objective");
      const double change = std::abs(updated - objective);
      objective = updated;
      if (change < opts.tolerance) {
        converged = true;
        break;
      }
    }
    // A single word scores 0; keep it when the fixed point is worse.
    if (converged && objective > 0.0) {
      q = Eigen::MatrixXd::Constant(1, n, 1.0);
      s = evaluate_encoder(q, prior, m, meaning_marginal);
    }
    compact_words(q, s, opts.merge_tolerance);
    if (!converged) {
      curve.flagged_betas.push_back(beta);
      continue;
    }
    IBPoint point;
    point.complexity = s.complexity / kLn2;
    point.accuracy = s.accuracy / kLn2;
    point.fitted_beta = beta;
    curve.betas.push_back(beta);
    curve.points.push_back(point);
    if (opts.keep_encoders) curve.encoders.push_back(NamingSystem::from_unnormalized(q));
  }
  if (curve.points.empty()) fail(ErrorKind::numerical, "no beta in the schedule converged");
  return curve;
}

double frontier_accuracy_at(const IBCurve& curve, double complexity) {
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  for (const IBPoint& p : curve.points) pts.emplace_back(p.complexity, p.accuracy);
  std::sort(pts.begin(), pts.end());
  if (complexity <= 0.0) return 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (complexity <= pts[i].first) {
      const auto [x0, y0] = pts[i - 1];
      const auto [x1, y1] = pts[i];
      if (x1 - x0 <= 0.0) return std::max(y0, y1);
      return y0 + (y1 - y0) * (complexity - x0) / (x1 - x0);
    }
  }
  return pts.back().second;
}

void write_curve_csv(std::ostream& out, const IBCurve& curve) {
  out << "beta,complexity,accuracy\n";
  char buf[96];
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", curve.betas[i], curve.points[i].complexity,
                  curve.points[i].accuracy);
    out << buf;
  }
}

IBCurve read_curve_csv(std::istream& in) {
  IBCurve curve;
  std::string line;
  if (!std::getline(in, line) || line.rfind("beta,complexity,accuracy", 0) != 0) {
    fail(ErrorKind::format, "curve csv: missing header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double beta = 0, cx = 0, acc = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &beta, &cx, &acc) != 3) {
      fail(ErrorKind::format, "curve csv: malformed row '" + line + "'");
    }
    IBPoint p;
    p.complexity = cx;
    p.accuracy = acc;
    p.fitted_beta = beta;
    curve.betas.push_back(beta);
    curve.points.push_back(p);
  }
  return curve;
}

EpsilonFit inefficiency_epsilon(const IBPoint& point, const IBCurve& curve, EpsilonMode mode) {
  if (curve.points.empty()) fail(ErrorKind::validation, "empty IB curve");
  EpsilonFit fit;
  if (mode == EpsilonMode::vertical_gap) {
    fit.epsilon = std::max(0.0, frontier_accuracy_at(curve, point.complexity) - point.accuracy);
    return fit;
  }
  fit.epsilon = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const double beta = curve.betas[i];
    const IBPoint& opt = curve.points[i];
    const double gap = (point.complexity - opt.complexity) / beta - (point.accuracy - opt.accuracy);
    if (gap < fit.epsilon) {
      fit.epsilon = gap;
      fit.beta = beta;
    }
  }
  fit.epsilon = std::max(fit.epsilon, 0.0);
  return fit;
}

EpsilonFit inefficiency_epsilon(const NamingSystem& sys, const IBCurve& curve, const ChipGrid& grid,
                                const MeaningModel& mm, EpsilonMode mode) {
  return inefficiency_epsilon(evaluate(sys, grid, mm), curve, mode);
}

double gnid(const NamingSystem& a, const NamingSystem& b, const ChipGrid& grid) {
  check_chips(a, grid);
  check_chips(b, grid);
  const Eigen::MatrixXd pa = word_chip_joint(a.encoder(), grid.prior());
  const double cross = mi_nats(pa * b.encoder().transpose());
  const double self_a = mi_nats(pa * a.encoder().transpose());
  const double self_b = mi_nats(word_chip_joint(b.encoder(), grid.prior()) * b.encoder().transpose());
  const double denom = std::max(self_a, self_b);
  if (denom < 1e-12) {
    if (is_constant(a) && is_constant(b)) return 0.0;
    fail(ErrorKind::validation, "gNID undefined: both systems carry no information");
  }
  return std::max(0.0, 1.0 - cross / denom);
}

std::pair<double, int> min_gnid_to_set(const NamingSystem& sys, std::span<const NamingSystem> refs,
                                       const ChipGrid& grid) {
  if (refs.empty()) fail(ErrorKind::validation, "empty reference set");
  std::pair<double, int> best{std::numeric_limits<double>::infinity(), -1};
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const double d = gnid(sys, refs[i], grid);
    if (d < best.first) best = {d, static_cast<int>(i)};
  }
  return best;
}

Band band_of(double probability) noexcept {
  if (probability >= 0.75) return Band::strong;
  if (probability >= 0.3) return Band::faded;
  return Band::none;
}

ModeMap mode_map(const NamingSystem& sys) {
  ModeMap map;
  const int n = sys.num_chips();
  map.word.resize(n);
  map.max_prob.resize(n);
  map.band.resize(n);
  for (int c = 0; c < n; ++c) {
    int arg = 0;
    for (int w = 1; w < sys.num_words(); ++w) {
      if (sys(w, c) > sys(arg, c)) arg = w;
    }
    map.word[c] = arg;
    map.max_prob[c] = sys(arg, c);
    map.band[c] = band_of(sys(arg, c));
  }
  return map;
}

}  // namespace nilcolor

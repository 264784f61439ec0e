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

#include "agents.hpp"

#include "error.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace nilcolor {

namespace {

Eigen::MatrixXd glorot(int rows, int cols, Rng& rng) {
  const double a = std::sqrt(6.0 / (rows + cols));
  std::uniform_real_distribution<double> u(-a, a);
  Eigen::MatrixXd m(rows, cols);
  // Fill row-major so the draw order does not depend on Eigen's storage.
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

AgentParams make_agent(Role role, int inputs, int hidden, int outputs, Rng& rng) {
  AgentParams p;
  p.role = role;
  p.w1 = glorot(hidden, inputs, rng);
  p.b1 = Eigen::VectorXd::Zero(hidden);
  p.w2 = glorot(outputs, hidden, rng);
  p.b2 = Eigen::VectorXd::Zero(outputs);
  return p;
}

void check_shapes(const AgentParams& a, const AgentParams& b) {
  if (a.w1.rows() != b.w1.rows() || a.w1.cols() != b.w1.cols() || a.b1.size() != b.b1.size() ||
      a.w2.rows() != b.w2.rows() || a.w2.cols() != b.w2.cols() || a.b2.size() != b.b2.size()) {
    fail(ErrorKind::validation, "parameter shape mismatch");
  }
}

// Groups a batch by input id: forward each distinct input once and backprop
// the summed logit gradient. Exact because the gradient is linear in dlogits.
template <class Item, class Dlogit>
AgentParams grouped_gradient(const AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                             std::span<const Item> items, Dlogit&& add_dlogit) {
  AgentParams grad = p.zeros_like();
  std::map<int, std::vector<const Item*>> groups;
  for (const Item& it : items) {
    if (it.input_id < 0 || it.input_id >= static_cast<int>(inputs.size())) {
      fail(ErrorKind::validation, "input id out of range");
    }
    groups[it.input_id].push_back(&it);
  }
  for (const auto& [id, members] : groups) {
    const Eigen::VectorXd& x = inputs[id];
    const Forward f = forward(p, x);
    Eigen::VectorXd dlogits = Eigen::VectorXd::Zero(p.outputs());
    for (const Item* it : members) add_dlogit(*it, f, dlogits);
    accumulate_gradient(p, f, x, dlogits, grad);
  }
  return grad;
}

}  // namespace

AgentParams AgentParams::zeros_like() const {
  AgentParams z;
  z.role = role;
  z.w1 = Eigen::MatrixXd::Zero(w1.rows(), w1.cols());
  z.b1 = Eigen::VectorXd::Zero(b1.size());
  z.w2 = Eigen::MatrixXd::Zero(w2.rows(), w2.cols());
  z.b2 = Eigen::VectorXd::Zero(b2.size());
  return z;
}

bool AgentParams::all_zero() const {
  return w1.isZero(0.0) && b1.isZero(0.0) && w2.isZero(0.0) && b2.isZero(0.0);
}

AgentParams make_speaker(int num_words, Rng& rng, int hidden) {
  if (num_words < 1) fail(ErrorKind::validation, "speaker needs at least one word");
  return make_agent(Role::speaker, 3, hidden, num_words, rng);
}

AgentParams make_listener(int num_words, int num_chips, Rng& rng, int hidden) {
  if (num_words < 1 || num_chips < 1) fail(ErrorKind::validation, "listener needs words and chips");
  return make_agent(Role::listener, num_words, hidden, num_chips, rng);
}

AgentParams zero_agent(Role role, int inputs, int outputs, int hidden) {
  AgentParams p;
  p.role = role;
  p.w1 = Eigen::MatrixXd::Zero(hidden, inputs);
  p.b1 = Eigen::VectorXd::Zero(hidden);
  p.w2 = Eigen::MatrixXd::Zero(outputs, hidden);
  p.b2 = Eigen::VectorXd::Zero(outputs);
  return p;
}

Forward forward(const AgentParams& p, const Eigen::VectorXd& input) {
  Forward f;
  f.hidden = (p.w1 * input + p.b1).unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
  f.logits = p.w2 * f.hidden + p.b2;
  const double top = f.logits.maxCoeff();
  const double lse = top + std::log((f.logits.array() - top).exp().sum());
  f.log_probs = f.logits.array() - lse;
  f.probs = f.log_probs.array().exp();
  f.probs /= f.probs.sum();
  return f;
}

Eigen::VectorXd one_hot(int index, int size) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
  v[index] = 1.0;
  return v;
}

Eigen::VectorXd speaker_forward(const AgentParams& p, const std::array<double, 3>& lab,
                                double input_scale) {
  if (p.role != Role::speaker) fail(ErrorKind::validation, "speaker_forward on a listener");
  const Eigen::Vector3d x(lab[0] * input_scale, lab[1] * input_scale, lab[2] * input_scale);
  return forward(p, x).probs;
}

Eigen::VectorXd listener_forward(const AgentParams& p, const Eigen::VectorXd& word_one_hot) {
  if (p.role != Role::listener) fail(ErrorKind::validation, "listener_forward on a speaker");
  return forward(p, word_one_hot).probs;
}

void accumulate_gradient(const AgentParams& p, const Forward& f, const Eigen::VectorXd& input,
                         const Eigen::VectorXd& dlogits, AgentParams& grad) {
  grad.w2.noalias() += dlogits * f.hidden.transpose();
  grad.b2 += dlogits;
  const Eigen::VectorXd dz =
      (p.w2.transpose() * dlogits).cwiseProduct(f.hidden.cwiseProduct(
          (Eigen::VectorXd::Ones(f.hidden.size()) - f.hidden)));
  grad.w1.noalias() += dz * input.transpose();
  grad.b1 += dz;
}

OptimizerState OptimizerState::for_params(const AgentParams& p, double learning_rate) {
  OptimizerState s;
  s.learning_rate = learning_rate;
  s.first_moment = p.zeros_like();
  s.second_moment = p.zeros_like();
  return s;
}

void adam_step(OptimizerState& opt, AgentParams& params, const AgentParams& grads) {
  check_shapes(params, grads);
  check_shapes(params, opt.first_moment);
  check_shapes(params, opt.second_moment);
  ++opt.step;
  const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
  const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = opt.beta1 * m + (1.0 - opt.beta1) * g;
    v = opt.beta2 * v + (1.0 - opt.beta2) * g.cwiseProduct(g);
    param.array() -= opt.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + opt.eps_hat);
  };
  update(params.w1, grads.w1, opt.first_moment.w1, opt.second_moment.w1);
  update(params.b1, grads.b1, opt.first_moment.b1, opt.second_moment.b1);
  update(params.w2, grads.w2, opt.first_moment.w2, opt.second_moment.w2);
  update(params.b2, grads.b2, opt.first_moment.b2, opt.second_moment.b2);
}

AgentParams cross_entropy_gradient(const AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                                   std::span<const Sample> batch) {
  if (batch.empty()) return p.zeros_like();
  const double w = 1.0 / static_cast<double>(batch.size());
  return grouped_gradient(p, inputs, batch, [&](const Sample& s, const Forward& f, Eigen::VectorXd& d) {
    d += w * f.probs;
    d[s.target] -= w;
  });
}

double cross_entropy_loss(const AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                          std::span<const Sample> batch) {
  double loss = 0.0;
  for (const Sample& s : batch) loss -= forward(p, inputs[s.input_id]).log_probs[s.target];
  return batch.empty() ? 0.0 : loss / static_cast<double>(batch.size());
}

void train_supervised(AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                      std::span<const Sample> data, OptimizerState& opt, int steps, int batch_size,
                      Rng& rng) {
  if (data.empty()) fail(ErrorKind::validation, "empty training set");
  if (batch_size < 1) fail(ErrorKind::validation, "batch size must be positive");
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  std::vector<Sample> batch(static_cast<std::size_t>(batch_size));
  for (int step = 0; step < steps; ++step) {
    for (Sample& s : batch) s = data[pick(rng)];
    adam_step(opt, p, cross_entropy_gradient(p, inputs, batch));
  }
}

AgentParams reinforce_gradient(const AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                               std::span<const Episode> episodes, bool baseline) {
  if (episodes.empty()) return p.zeros_like();
  double b = 0.0;
  if (baseline) {
    for (const Episode& e : episodes) b += e.reward;
    b /= static_cast<double>(episodes.size());
  }
  const double scale = 1.0 / static_cast<double>(episodes.size());
  return grouped_gradient(p, inputs, episodes, [&](const Episode& e, const Forward& f, Eigen::VectorXd& d) {
    if (!std::isfinite(e.reward)) fail(ErrorKind::validation, "non-finite reward");
    const double w = scale * (e.reward - b);
    if (w == 0.0) return;
    // d/dlogits of -w log pi(a) = w (pi - e_a)
    d += w * f.probs;
    d[e.action] -= w;
  });
}

void reinforce_update(AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                      std::span<const Episode> episodes, OptimizerState& opt, bool baseline) {
  const AgentParams grad = reinforce_gradient(p, inputs, episodes, baseline);
  if (grad.all_zero()) return;
  adam_step(opt, p, grad);
}

int sample_index(const Eigen::VectorXd& probs, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double target = u(rng) * probs.sum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (target < acc) return static_cast<int>(i);
  }
  // Rounding: fall back to the last index with mass.
  for (Eigen::Index i = probs.size() - 1; i >= 0; --i) {
    if (probs[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

void write_agent(std::ostream& out, const AgentParams& p) {
  out << "nilcolor-agent 1\n";
  out << "role " << (p.role == Role::speaker ? "speaker" : "listener") << '\n';
  char buf[32];
  auto write = [&](const char* name, const Eigen::MatrixXd& m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
        if (j) out << '\t';
        out << buf;
      }
      out << '\n';
    }
  };
  write("w1", p.w1);
  write("b1", p.b1);
  write("w2", p.w2);
  write("b2", p.b2);
}

AgentParams read_agent(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "nilcolor-agent" || version != 1) {
    fail(ErrorKind::format, "agent checkpoint: bad magic/version");
  }
  std::string key, role;
  if (!(in >> key >> role) || key != "role" || (role != "speaker" && role != "listener")) {
    fail(ErrorKind::format, "agent checkpoint: bad role line");
  }
  AgentParams p;
  p.role = role == "speaker" ? Role::speaker : Role::listener;
  auto read = [&](const char* name) {
    std::string got;
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> got >> rows >> cols) || got != name || rows < 0 || cols < 0) {
      fail(ErrorKind::format, std::string("agent checkpoint: expected array ") + name);
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (!(in >> m(i, j))) fail(ErrorKind::format, std::string("agent checkpoint: short array ") + name);
      }
    }
    return m;
  };
  auto read_vector = [&](const char* name) -> Eigen::VectorXd {
    const Eigen::MatrixXd m = read(name);
    if (m.cols() != 1) fail(ErrorKind::format, std::string("agent checkpoint: ") + name + " must be n x 1");
    return m.col(0);
  };
  p.w1 = read("w1");
  p.b1 = read_vector("b1");
  p.w2 = read("w2");
  p.b2 = read_vector("b2");
  if (p.b1.size() != p.w1.rows() || p.w2.cols() != p.w1.rows() || p.b2.size() != p.w2.rows()) {
    fail(ErrorKind::format, "agent checkpoint: inconsistent shapes");
  }
  return p;
}

}  // namespace nilcolor

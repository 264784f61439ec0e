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

// One-hidden-layer speaker and listener networks trained with exact
// backpropagation: cross-entropy for imitation, score-function (REINFORCE)
// gradients for the signaling game, Adam for every update.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace nilcolor {

using Rng = std::mt19937_64;

enum class Role { speaker, listener };

inline constexpr int kDefaultHidden = 25;
inline constexpr double kDefaultInputScale = 0.01;  // CIELAB / 100

/// Weights of a sigmoid-hidden, softmax-output network. Also used as the
/// gradient container (same shapes).
struct AgentParams {
  Role role = Role::speaker;
  Eigen::MatrixXd w1;  // hidden x in
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // out x hidden
  Eigen::VectorXd b2;

  int inputs() const { return static_cast<int>(w1.cols()); }
  int hidden() const { return static_cast<int>(w1.rows()); }
  int outputs() const { return static_cast<int>(w2.rows()); }

  AgentParams zeros_like() const;
  bool all_zero() const;
};

/// Glorot-uniform weights, zero biases. Speaker: 3 -> hidden -> K.
AgentParams make_speaker(int num_words, Rng& rng, int hidden = kDefaultHidden);
/// Listener: K (one-hot word) -> hidden -> num_chips.
AgentParams make_listener(int num_words, int num_chips, Rng& rng, int hidden = kDefaultHidden);
AgentParams zero_agent(Role role, int inputs, int outputs, int hidden = kDefaultHidden);

struct Forward {
  Eigen::VectorXd hidden;
  Eigen::VectorXd logits;
  Eigen::VectorXd log_probs;
  Eigen::VectorXd probs;
};

Forward forward(const AgentParams& p, const Eigen::VectorXd& input);

/// Distribution over K words for a CIELAB color (scaled by `input_scale`).
Eigen::VectorXd speaker_forward(const AgentParams& p, const std::array<double, 3>& lab,
                                double input_scale = kDefaultInputScale);
/// Distribution over chips for a one-hot word vector.
Eigen::VectorXd listener_forward(const AgentParams& p, const Eigen::VectorXd& word_one_hot);
Eigen::VectorXd one_hot(int index, int size);

/// grad += backprop of d(loss)/d(logits) = `dlogits` at `input`.
void accumulate_gradient(const AgentParams& p, const Forward& f, const Eigen::VectorXd& input,
                         const Eigen::VectorXd& dlogits, AgentParams& grad);

// ---------------------------------------------------------------------------
// Adam

struct OptimizerState {
  long step = 0;
  double learning_rate = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
  AgentParams first_moment;
  AgentParams second_moment;

  static OptimizerState for_params(const AgentParams& p, double learning_rate = 0.005);
};

/// Bias-corrected Adam update in place.
void adam_step(OptimizerState& opt, AgentParams& params, const AgentParams& grads);

// ---------------------------------------------------------------------------
// Training

/// An input table row id with its target/action. Inputs are looked up in a
/// shared table so that repeated inputs within a batch share one forward pass.
struct Sample {
  int input_id = 0;
  int target = 0;
};

struct Episode {
  int input_id = 0;
  int action = 0;
  double reward = 0.0;
};

/// Mean cross-entropy gradient of -log p(target | input) over `batch`.
AgentParams cross_entropy_gradient(const AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                                   std::span<const Sample> batch);
double cross_entropy_loss(const AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                          std::span<const Sample> batch);

/// `steps` Adam steps on minibatches of `batch_size` drawn with replacement.
void train_supervised(AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                      std::span<const Sample> data, OptimizerState& opt, int steps, int batch_size,
                      Rng& rng);

/// Gradient of -(1/B) sum_i (r_i - b) log pi(a_i | x_i); b is the batch mean
/// reward when `baseline` is set, else 0.
AgentParams reinforce_gradient(const AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                               std::span<const Episode> episodes, bool baseline = false);

/// One Adam step along the REINFORCE gradient. An identically zero gradient
/// (e.g. all rewards 0) leaves params and optimizer state untouched.
void reinforce_update(AgentParams& p, std::span<const Eigen::VectorXd> inputs,
                      std::span<const Episode> episodes, OptimizerState& opt, bool baseline = false);

/// Inverse-CDF draw from a discrete distribution.
int sample_index(const Eigen::VectorXd& probs, Rng& rng);

// ---------------------------------------------------------------------------
// Checkpoints
//
//   nilcolor-agent 1
//   role speaker|listener
//   <name> <rows> <cols>        for name in w1 b1 w2 b2 (vectors are n x 1)
//   <rows lines of tab-separated %.17g values>

void write_agent(std::ostream& out, const AgentParams& p);
AgentParams read_agent(std::istream& in);

}  // namespace nilcolor

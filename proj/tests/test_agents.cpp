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
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "agents.hpp"
#include "grad_check.hpp"
#include "support.hpp"

using namespace nilcolor;

using testing::flat;
using testing::slots;
using testing::numeric_gradient;
using testing::random_net;
using testing::relative_error;

TEST_CASE("forward passes") {
  SUBCASE("zero weights give the uniform distribution") {
    const AgentParams s = zero_agent(Role::speaker, 3, 7);
    const Eigen::VectorXd q = speaker_forward(s, Lab{50, 20, -30});
    for (int w = 0; w < 7; ++w) CHECK(q[w] == doctest::Approx(1.0 / 7).epsilon(1e-15));
    const AgentParams l = zero_agent(Role::listener, 4, 330);
    const Eigen::VectorXd p = listener_forward(l, one_hot(2, 4));
    for (int c = 0; c < 330; ++c) CHECK(p[c] == doctest::Approx(1.0 / 330).epsilon(1e-15));
  }
  SUBCASE("outputs are distributions even for extreme logits") {
    std::mt19937_64 rng(1);
    AgentParams s = random_net(3, 25, 5, rng);
    s.w2 *= 400.0;
    for (double x : {-1e4, -100.0, 0.0, 100.0, 1e4}) {
      const Eigen::VectorXd q = speaker_forward(s, Lab{x, -x, x / 2}, 1.0);
      CHECK(q.allFinite());
      CHECK(std::abs(q.sum() - 1.0) < 1e-9);
    }
  }
  SUBCASE("hand-evaluated speaker") {
    AgentParams s = zero_agent(Role::speaker, 3, 2, 2);
    s.w1 << 1, 0, 0, 0, 1, -1;
    s.b1 << 0, 0.5;
    s.w2 << 1, -1, 0.5, 2;
    s.b2 << 0, 0.1;
    // Input (0.5, 0.2, 0.1) after scaling 0.01.
    const double h0 = 1.0 / (1.0 + std::exp(-0.5));
    const double h1 = 1.0 / (1.0 + std::exp(-(0.2 - 0.1 + 0.5)));
    const double z0 = h0 - h1, z1 = 0.5 * h0 + 2 * h1 + 0.1;
    const double p0 = std::exp(z0) / (std::exp(z0) + std::exp(z1));
    const Eigen::VectorXd q = speaker_forward(s, Lab{50, 20, 10}, 0.01);
    CHECK(q[0] == doctest::Approx(p0).epsilon(1e-14));
    CHECK(q[1] == doctest::Approx(1 - p0).epsilon(1e-14));
  }
  SUBCASE("hand-evaluated listener") {
    AgentParams l = zero_agent(Role::listener, 2, 3, 1);
    l.w1 << 2, -1;
    l.w2 << 1, 0, -1;
    const double h = 1.0 / (1.0 + std::exp(1.0));  // word 1
    const double z = std::exp(h) + 1.0 + std::exp(-h);
    const Eigen::VectorXd p = listener_forward(l, one_hot(1, 2));
    CHECK(p[0] == doctest::Approx(std::exp(h) / z).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(1.0 / z).epsilon(1e-14));
  }
}

TEST_CASE("backpropagation matches central differences") {
  const testing::BackpropErrors worst = testing::worst_backprop_errors(42, 100);
  CHECK(worst.cross_entropy < 1e-4);
  CHECK(worst.reinforce < 1e-4);
}

TEST_CASE("Adam") {
  SUBCASE("first step moves by the learning rate against the gradient sign") {
    AgentParams p = zero_agent(Role::speaker, 1, 1, 1);
    for (double* v : slots(p)) *v = 1.0;
    AgentParams g = p.zeros_like();
    for (double* v : slots(g)) *v = 2.0;
    OptimizerState opt = OptimizerState::for_params(p, 0.005);
    adam_step(opt, p, g);
    for (double v : flat(p)) CHECK(v == doctest::Approx(0.995).epsilon(1e-8));
    CHECK(opt.step == 1);
  }
  SUBCASE("zero gradient leaves params unchanged") {
    std::mt19937_64 rng(2);
    AgentParams p = make_speaker(4, rng);
    const auto before = flat(p);
    OptimizerState opt = OptimizerState::for_params(p);
    adam_step(opt, p, p.zeros_like());
    CHECK(flat(p) == before);
  }
  SUBCASE("shape mismatch") {
    std::mt19937_64 rng(2);
    AgentParams p = make_speaker(4, rng);
    OptimizerState opt = OptimizerState::for_params(p);
    CHECK_ERROR_KIND(adam_step(opt, p, make_speaker(5, rng)), validation);
  }
}

TEST_CASE("supervised training") {
  const std::vector<Eigen::VectorXd> inputs{Eigen::Vector3d(0.1, 0.0, 0.0), Eigen::Vector3d(0.9, 0.2, 0.0),
                                            Eigen::Vector3d(0.2, 0.8, 0.5), Eigen::Vector3d(0.7, 0.7, 0.9)};
  const std::vector<Sample> data{{0, 0}, {1, 1}, {2, 0}, {3, 1}};
  SUBCASE("fits a four-chip toy") {
    std::mt19937_64 rng(7);
    AgentParams p = make_speaker(2, rng);
    OptimizerState opt = OptimizerState::for_params(p);
    train_supervised(p, inputs, data, opt, 1000, 50, rng);
    for (const Sample& s : data) {
      Eigen::Index arg = 0;
      forward(p, inputs[s.input_id]).probs.maxCoeff(&arg);
      CHECK(arg == s.target);
    }
  }
  SUBCASE("zero steps is a no-op") {
    std::mt19937_64 rng(7);
    AgentParams p = make_speaker(2, rng);
    const auto before = flat(p);
    OptimizerState opt = OptimizerState::for_params(p);
    train_supervised(p, inputs, data, opt, 0, 50, rng);
    CHECK(flat(p) == before);
  }
  SUBCASE("same seed, same trajectory") {
    std::vector<double> runs[2];
    for (auto& r : runs) {
      std::mt19937_64 rng(99);
      AgentParams p = make_speaker(2, rng);
      OptimizerState opt = OptimizerState::for_params(p);
      train_supervised(p, inputs, data, opt, 50, 50, rng);
      r = flat(p);
    }
    CHECK(runs[0] == runs[1]);
  }
}

TEST_CASE("REINFORCE") {
  const std::vector<Eigen::VectorXd> state{Eigen::VectorXd::Ones(1)};

  SUBCASE("zero rewards change nothing") {
    std::mt19937_64 rng(3);
    AgentParams p = make_listener(1, 2, rng);
    const auto before = flat(p);
    OptimizerState opt = OptimizerState::for_params(p);
    const std::vector<Episode> eps{{0, 0, 0.0}, {0, 1, 0.0}};
    reinforce_update(p, state, eps, opt);
    CHECK(flat(p) == before);
    CHECK(opt.step == 0);
  }

  SUBCASE("two-action bandit improves monotonically") {
    std::mt19937_64 rng(4);
    AgentParams p = make_listener(1, 2, rng);
    OptimizerState opt = OptimizerState::for_params(p);
    double last = forward(p, state[0]).probs[0];
    const double start = last;
    int increases = 0;
    for (int step = 0; step < 200; ++step) {
      const Eigen::VectorXd pi = forward(p, state[0]).probs;
      std::vector<Episode> eps;
      for (int i = 0; i < 50; ++i) {
        const int a = sample_index(pi, rng);
        eps.push_back({0, a, a == 0 ? 1.0 : 0.0});
      }
      reinforce_update(p, state, eps, opt);
      const double now = forward(p, state[0]).probs[0];
      if (now > last) ++increases;
      last = now;
    }
    CHECK(increases == 200);
    CHECK(last > start + 0.3);
  }

  SUBCASE("score-function estimate matches the exact gradient of a toy game") {
    // Three chips, two words; the listener is fixed.
    std::mt19937_64 rng(8);
    const AgentParams speaker = random_net(3, 4, 2, rng);
    const std::vector<Eigen::VectorXd> chips{Eigen::Vector3d(0.5, 0.1, 0.0), Eigen::Vector3d(0.2, 0.9, 0.3),
                                             Eigen::Vector3d(0.8, 0.4, 0.6)};
    const double listen[2][3] = {{0.9, 0.05, 0.05}, {0.05, 0.05, 0.9}};
    const double reward[3][3] = {{1.0, 0.1, 0.0}, {0.1, 1.0, 0.1}, {0.0, 0.1, 1.0}};
    const auto expected_reward = [&](const AgentParams& s) {
      double j = 0.0;
      for (int c = 0; c < 3; ++c) {
        const Eigen::VectorXd pi = forward(s, chips[c]).probs;
        for (int w = 0; w < 2; ++w)
          for (int g = 0; g < 3; ++g) j += pi[w] * listen[w][g] * reward[c][g] / 3.0;
      }
      return j;
    };
    std::vector<double> exact = numeric_gradient(speaker, expected_reward);
    for (double& v : exact) v = -v;  // the update direction minimizes -J

    std::vector<Episode> eps;
    std::uniform_int_distribution<int> chip(0, 2);
    for (int i = 0; i < 100000; ++i) {
      const int c = chip(rng);
      const int w = sample_index(forward(speaker, chips[c]).probs, rng);
      // The listener is fixed, so its guess is averaged out of the reward.
      double r = 0.0;
      for (int g = 0; g < 3; ++g) r += listen[w][g] * reward[c][g];
      eps.push_back({c, w, r});
    }
    const std::vector<double> estimate = flat(reinforce_gradient(speaker, chips, eps));
    CHECK(relative_error(estimate, exact) < 0.05);
  }
}

TEST_CASE("sample_index follows the distribution") {
  std::mt19937_64 rng(12);
  const Eigen::Vector4d p(0.1, 0.2, 0.3, 0.4);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 40000; ++i) ++counts[sample_index(p, rng)];
  double chi2 = 0.0;
  for (int k = 0; k < 4; ++k) chi2 += std::pow(counts[k] - 40000 * p[k], 2) / (40000 * p[k]);
  CHECK(chi2 < 11.34);  // chi-square(3) at 0.01
}

TEST_CASE("agent checkpoint round trip") {
  std::mt19937_64 rng(5);
  const AgentParams p = make_listener(6, 330, rng);
  std::stringstream s;
  write_agent(s, p);
  const AgentParams q = read_agent(s);
  CHECK(q.role == Role::listener);
  CHECK(flat(q) == flat(p));
  std::istringstream bad("nilcolor-agent 9\n");
  CHECK_ERROR_KIND(read_agent(bad), format);
}

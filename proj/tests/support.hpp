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
#pragma once

#include <Eigen/Dense>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "color_domain.hpp"
#include "error.hpp"
#include "ib.hpp"
#include "report.hpp"
#include "naming_system.hpp"

namespace testing {

template <class F>
nilcolor::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const nilcolor::Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected a nilcolor::Error");
}

#define CHECK_ERROR_KIND(expr, kind) \
  CHECK(::testing::error_kind_of([&] { (void)(expr); }) == ::nilcolor::ErrorKind::kind)

inline nilcolor::ChipGrid tiny_grid(const std::vector<nilcolor::Lab>& labs) {
  std::vector<nilcolor::Chip> chips;
  for (std::size_t i = 0; i < labs.size(); ++i) {
    nilcolor::Chip c;
    c.index = static_cast<int>(i);
    c.row = static_cast<char>('A' + i % 10);
    c.column = static_cast<int>(i / 10);
    c.lab = labs[i];
    chips.push_back(c);
  }
  const int n = static_cast<int>(labs.size());
  return nilcolor::ChipGrid(std::move(chips), Eigen::VectorXd::Constant(n, 1.0 / n));
}

// Six chips in three well separated pairs.
inline nilcolor::ChipGrid three_cluster_grid() {
  return tiny_grid({{50, 0, 0}, {51, 0, 0}, {50, 60, 0}, {51, 60, 0}, {50, 0, 60}, {51, 0, 60}});
}

inline nilcolor::NamingSystem deterministic(const std::vector<int>& labels, int num_words) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(num_words, static_cast<int>(labels.size()));
  for (std::size_t c = 0; c < labels.size(); ++c) q(labels[c], static_cast<int>(c)) = 1.0;
  return nilcolor::NamingSystem(q);
}

inline nilcolor::NamingSystem random_system(int num_words, int num_chips, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Eigen::MatrixXd w(num_words, num_chips);
  for (int i = 0; i < w.size(); ++i) w(i) = u(rng);
  return nilcolor::NamingSystem::from_unnormalized(w);
}

inline Eigen::MatrixXd random_joint(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd j(rows, cols);
  for (int i = 0; i < j.size(); ++i) j(i) = u(rng);
  return j / j.sum();
}

// Default-schedule frontier of the bundled grid at the default meaning width,
// cached in the build tree across test runs.
inline const nilcolor::IBCurve& shared_frontier() {
  static const nilcolor::IBCurve curve = [] {
    const nilcolor::ChipGrid grid = nilcolor::default_chip_grid();
    return nilcolor::cached_ib_frontier(grid, nilcolor::build_meaning_model(grid),
                                        nilcolor::FrontierOptions{}, NILCOLOR_TEST_CACHE);
  }();
  return curve;
}

}  // namespace testing

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

#include <iosfwd>
#include <string>

namespace nilcolor {

/// A naming system q(w|c): K words x N chips, column c is the distribution
/// over words for chip c.
class NamingSystem {
 public:
  NamingSystem() = default;
  /// Validates column-stochasticity to 1e-9.
  explicit NamingSystem(Eigen::MatrixXd encoder);

  /// Normalizes each column; columns that sum to 0 are rejected.
  static NamingSystem from_unnormalized(Eigen::MatrixXd weights);

  int num_words() const noexcept { return static_cast<int>(encoder_.rows()); }
  int num_chips() const noexcept { return static_cast<int>(encoder_.cols()); }
  const Eigen::MatrixXd& encoder() const noexcept { return encoder_; }
  double operator()(int word, int chip) const { return encoder_(word, chip); }

  /// The one-word system.
  static NamingSystem constant(int num_chips);

 private:
  Eigen::MatrixXd encoder_;
};

inline constexpr const char* kDefaultGridId = "munsell330";

/// TSV form: a `K=<int> grid=<id>` line, then K rows of N tab-separated
/// probabilities printed with round-trip precision.
void write_naming_system(std::ostream& out, const NamingSystem& sys,
                         const std::string& grid_id = kDefaultGridId);
NamingSystem read_naming_system(std::istream& in, int expected_chips, std::string* grid_id = nullptr);

void save_naming_system(const std::string& path, const NamingSystem& sys,
                        const std::string& grid_id = kDefaultGridId);
NamingSystem load_naming_system(const std::string& path, int expected_chips,
                                std::string* grid_id = nullptr);

}  // namespace nilcolor

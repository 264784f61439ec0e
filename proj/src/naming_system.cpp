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

#include "naming_system.hpp"

#include "error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nilcolor {

NamingSystem::NamingSystem(Eigen::MatrixXd encoder) : encoder_(std::move(encoder)) {
  if (encoder_.rows() < 1 || encoder_.cols() < 1) {
    fail(ErrorKind::validation, "naming system needs at least one word and one chip");
  }
  if (!encoder_.allFinite() || (encoder_.array() < 0.0).any()) {
    fail(ErrorKind::validation, "naming system has negative or non-finite entries");
  }
  for (Eigen::Index c = 0; c < encoder_.cols(); ++c) {
    if (std::abs(encoder_.col(c).sum() - 1.0) > 1e-9) {
      fail(ErrorKind::validation, "naming system column " + std::to_string(c) + " does not sum to 1");
    }
  }
}

NamingSystem NamingSystem::from_unnormalized(Eigen::MatrixXd weights) {
  for (Eigen::Index c = 0; c < weights.cols(); ++c) {
    const double s = weights.col(c).sum();
    if (!(s > 0.0)) fail(ErrorKind::validation, "column " + std::to_string(c) + " has no mass");
    weights.col(c) /= s;
  }
  return NamingSystem(std::move(weights));
}

NamingSystem NamingSystem::constant(int num_chips) {
  return NamingSystem(Eigen::MatrixXd::Ones(1, num_chips));
}

void write_naming_system(std::ostream& out, const NamingSystem& sys, const std::string& grid_id) {
  out << "K=" << sys.num_words() << " grid=" << grid_id << '\n';
  char buf[32];
  for (int w = 0; w < sys.num_words(); ++w) {
    for (int c = 0; c < sys.num_chips(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", sys(w, c));
      if (c) out << '\t';
      out << buf;
    }
    out << '\n';
  }
}

NamingSystem read_naming_system(std::istream& in, int expected_chips, std::string* grid_id) {
  std::string header;
  if (!std::getline(in, header)) fail(ErrorKind::format, "naming system: empty input");
  int k = 0;
  char id[128] = {0};
  if (std::sscanf(header.c_str(), "K=%d grid=%127s", &k, id) != 2 || k < 1) {
    fail(ErrorKind::format, "naming system: bad header '" + header + "'");
  }
  if (grid_id) *grid_id = id;
  Eigen::MatrixXd enc(k, expected_chips);
  std::string line;
  for (int w = 0; w < k; ++w) {
    if (!std::getline(in, line)) fail(ErrorKind::format, "naming system: missing row " + std::to_string(w));
    std::istringstream fields(line);
    for (int c = 0; c < expected_chips; ++c) {
      std::string tok;
      if (!(fields >> tok)) {
        fail(ErrorKind::format, "naming system: row " + std::to_string(w) + " has too few columns");
      }
      char* end = nullptr;
      enc(w, c) = std::strtod(tok.c_str(), &end);
      if (*end != '\0') fail(ErrorKind::format, "naming system: bad number '" + tok + "'");
    }
    std::string extra;
    if (fields >> extra) {
      fail(ErrorKind::format, "naming system: row " + std::to_string(w) + " has too many columns");
    }
  }
  return NamingSystem(std::move(enc));
}

void save_naming_system(const std::string& path, const NamingSystem& sys, const std::string& grid_id) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write " + path);
  write_naming_system(out, sys, grid_id);
}

NamingSystem load_naming_system(const std::string& path, int expected_chips, std::string* grid_id) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  return read_naming_system(in, expected_chips, grid_id);
}

}  // namespace nilcolor

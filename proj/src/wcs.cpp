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

#include "wcs.hpp"

#include "error.hpp"
#include "ib.hpp"
#include "parallel.hpp"
#include "random_model.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace nilcolor {

namespace {

int grid_index(const ChipGrid& grid, char row, int col) {
  for (const Chip& c : grid.chips()) {
    if (c.row == row && c.column == col) return c.index;
  }
  fail(ErrorKind::format, std::string("no chip at ") + row + std::to_string(col));
}

// Chips sorted by distance to `center`, nearest first (center included).
std::vector<int> neighbors(const ChipGrid& grid, int center, int count) {
  std::vector<int> idx(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return perceptual_distance_sq(grid.chip(a), grid.chip(center)) <
           perceptual_distance_sq(grid.chip(b), grid.chip(center));
  });
  idx.resize(static_cast<std::size_t>(std::min(count, grid.size())));
  return idx;
}

// Focal prototypes in the order basic terms are typically added.
std::vector<std::pair<char, int>> focal_stage(int k, bool grue_first) {
  const std::pair<char, int> white{'A', 0}, black{'J', 0}, red{'G', 2}, yellow{'C', 9},
      grue{'F', 23}, green{'F', 17}, blue{'F', 29}, brown{'G', 7};
  switch (k) {
    case 3: return {white, black, red};
    case 4: return {white, black, red, grue_first ? grue : yellow};
    case 5: return {white, black, red, yellow, grue};
    case 6: return {white, black, red, yellow, green, blue};
    default: return {white, black, red, yellow, green, blue, brown};
  }
}

constexpr std::uint64_t kFixtureRoot = 0x5eed0f1c7u;
constexpr int kFixtureSpeakers = 25;

// One synthetic language as WCS-format term lines.
std::string simulate_language(const ChipGrid& grid, int lang_id, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double eta = kEtaLow + (kEtaHigh - kEtaLow) * unit(rng);
  std::vector<int> protos;
  for (auto [row, col] : focal_stage(k, lang_id % 2 == 1)) {
    const auto near = neighbors(grid, grid_index(grid, row, col), 6);
    protos.push_back(near[std::uniform_int_distribution<std::size_t>(0, near.size() - 1)(rng)]);
  }
  std::ostringstream out;
  for (int s = 1; s <= kFixtureSpeakers; ++s) {
    RMParams p;
    p.num_words = k;
    p.eta = eta * (0.75 + 0.5 * unit(rng));
    for (int w = 0; w < k; ++w) {
      const auto near = neighbors(grid, protos[w], 4);
      int pick = near[std::uniform_int_distribution<std::size_t>(0, near.size() - 1)(rng)];
      // Two words of one speaker may not share a prototype.
      while (std::find(p.prototypes.begin(), p.prototypes.end(), pick) != p.prototypes.end()) {
        pick = near[std::uniform_int_distribution<std::size_t>(0, near.size() - 1)(rng)];
      }
      p.prototypes.push_back(pick);
    }
    const NamingSystem speaker = kernel_system(grid, p);
    for (int c = 0; c < grid.size(); ++c) {
      const double draw = unit(rng);
      double acc = 0.0;
      int word = k - 1;
      for (int w = 0; w < k; ++w) {
        acc += speaker(w, c);
        if (draw < acc) {
          word = w;
          break;
        }
      }
      out << lang_id << '\t' << s << '\t' << (c + 1) << '\t' << "T" << word << '\n';
    }
  }
  return out.str();
}

}  // namespace

ChipIdMap read_chip_id_map(std::istream& in, const ChipGrid& grid) {
  ChipIdMap map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream f(line);
    int id = 0, col = 0;
    std::string row;
    if (!(f >> id >> row >> col)) {
      if (line_no == 1) continue;  // header
      fail(ErrorKind::format, "chip id map: malformed line " + std::to_string(line_no));
    }
    if (row.size() != 1) fail(ErrorKind::format, "chip id map: bad row at line " + std::to_string(line_no));
    if (!map.emplace(id, grid_index(grid, row[0], col)).second) {
      fail(ErrorKind::format, "chip id map: duplicate chip " + std::to_string(id));
    }
  }
  return map;
}

ChipIdMap identity_chip_id_map(const ChipGrid& grid) {
  ChipIdMap map;
  for (int i = 0; i < grid.size(); ++i) map.emplace(i + 1, i);
  return map;
}

std::vector<WcsLanguage> parse_wcs(std::istream& term_file, std::istream* dict_file,
                                   const ChipGrid& grid, const ChipIdMap& chip_ids,
                                   const WcsParseOptions& opts) {
  struct Counts {
    std::map<std::string, std::vector<double>> by_term;  // term -> per-chip counts
    std::set<int> speakers;
  };
  std::map<int, Counts> langs;
  const int n = grid.size();
  std::string line;
  int line_no = 0;
  while (std::getline(term_file, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream f(line);
    int lang = 0, speaker = 0, chip = 0;
    std::string term;
    if (!(f >> lang >> speaker >> chip >> term)) {
      fail(ErrorKind::format, "term file: malformed line " + std::to_string(line_no));
    }
    const auto it = chip_ids.find(chip);
    if (chip < 1 || chip > kNumChips || it == chip_ids.end()) {
      fail(ErrorKind::format, "term file: chip id " + std::to_string(chip) + " outside 1..330 at line " +
                                  std::to_string(line_no));
    }
    Counts& counts = langs[lang];
    counts.speakers.insert(speaker);
    if (term == "*") continue;  // no response recorded
    auto& row = counts.by_term[term];
    if (row.empty()) row.assign(static_cast<std::size_t>(n), 0.0);
    row[it->second] += 1.0;
  }

  std::map<std::pair<int, std::string>, std::string> names;
  if (dict_file) {
    while (std::getline(*dict_file, line)) {
      std::istringstream f(line);
      int lang = 0;
      std::string code, term;
      if (f >> lang >> code >> term) names[{lang, code}] = term;
    }
  }

  std::vector<WcsLanguage> out;
  for (auto& [id, counts] : langs) {
    WcsLanguage lang;
    lang.id = id;
    lang.name = "lang" + std::to_string(id);
    lang.speaker_count = static_cast<int>(counts.speakers.size());
    lang.num_terms = static_cast<int>(counts.by_term.size());
    lang.flagged = lang.num_terms < 2;
    if (lang.num_terms == 0) {
      fail(ErrorKind::format, "language " + std::to_string(id) + " has no responses");
    }
    Eigen::MatrixXd q(lang.num_terms, n);
    int w = 0;
    for (const auto& [term, row] : counts.by_term) {
      const auto named = names.find({id, term});
      lang.terms.push_back(named == names.end() ? term : named->second);
      for (int c = 0; c < n; ++c) q(w, c) = row[c];
      ++w;
    }
    const Eigen::VectorXd marginal = q.rowwise().sum() / q.sum();
    for (int c = 0; c < n; ++c) {
      if (q.col(c).sum() == 0.0) {
        if (opts.strict_missing) {
          fail(ErrorKind::format, "language " + std::to_string(id) + " has no responses for chip " +
                                      std::to_string(c));
        }
        q.col(c) = marginal;
      }
    }
    lang.encoder = NamingSystem::from_unnormalized(std::move(q));
    out.push_back(std::move(lang));
  }
  return out;
}

std::vector<WcsLanguage> load_wcs_dir(const std::string& dir, const ChipGrid& grid,
                                      const WcsParseOptions& opts) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::ifstream terms(root / "term.txt");
  if (!terms) fail(ErrorKind::data_missing, "WCS term file not found in " + dir);
  ChipIdMap ids = identity_chip_id_map(grid);
  if (std::ifstream map_file(root / "chip_ids.tsv"); map_file) ids = read_chip_id_map(map_file, grid);
  std::ifstream dict(root / "dict.txt");
  return parse_wcs(terms, dict ? &dict : nullptr, grid, ids, opts);
}

std::vector<WcsLanguage> fixture_languages(const ChipGrid& grid, int count) {
  std::vector<WcsLanguage> langs(static_cast<std::size_t>(count));
  const ChipIdMap ids = identity_chip_id_map(grid);
  for (int i = 0; i < count; ++i) {
    const int k = 3 + i % 5;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) fail(ErrorKind::numerical, "fixture generation did not reach the WCS range");
      const std::uint64_t seed = derive_seed(kFixtureRoot, {static_cast<std::uint64_t>(i),
                                                            static_cast<std::uint64_t>(attempt)});
      std::istringstream text(simulate_language(grid, i + 1, k, seed));
      std::vector<WcsLanguage> parsed = parse_wcs(text, nullptr, grid, ids);
      const double cx = complexity(parsed.front().encoder, grid);
      if (cx < 0.84 || cx > 2.65) continue;
      langs[i] = std::move(parsed.front());
      langs[i].name = "fixture" + std::to_string(i + 1);
      break;
    }
  }
  return langs;
}

std::vector<WcsLanguage> reference_languages(const ChipGrid& grid,
                                             const std::optional<std::string>& data_dir,
                                             bool* used_fixtures) {
  if (data_dir && std::filesystem::exists(std::filesystem::path(*data_dir) / "term.txt")) {
    if (used_fixtures) *used_fixtures = false;
    return load_wcs_dir(*data_dir, grid);
  }
  if (used_fixtures) *used_fixtures = true;
  return fixture_languages(grid);
}

std::vector<NamingSystem> encoders_of(const std::vector<WcsLanguage>& langs) {
  std::vector<NamingSystem> out;
  out.reserve(langs.size());
  for (const WcsLanguage& l : langs) out.push_back(l.encoder);
  return out;
}

}  // namespace nilcolor

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

// World Color Survey ingestion plus a synthetic stand-in corpus for running
// without the external dataset.

#pragma once

#include "color_domain.hpp"
#include "naming_system.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nilcolor {

struct WcsLanguage {
  int id = 0;
  std::string name;
  NamingSystem encoder;
  int num_terms = 0;
  int speaker_count = 0;
  std::vector<std::string> terms;  // word index -> term code
  bool flagged = false;            // fewer than two distinct terms
};

/// WCS chip number (1..330) -> grid index.
using ChipIdMap = std::map<int, int>;

/// Parses `wcs_chip<TAB>row<TAB>col` and resolves each (row, col) against
/// the grid.
ChipIdMap read_chip_id_map(std::istream& in, const ChipGrid& grid);
/// Chip number i+1 is grid index i.
ChipIdMap identity_chip_id_map(const ChipGrid& grid);

struct WcsParseOptions {
  // Error instead of imputing the language marginal for unnamed chips.
  bool strict_missing = false;
};

/// term_file rows: `lang speaker chip term`, whitespace separated. dict_file
/// (optional) rows: `lang term_code term_string [...]`; only used for names.
/// q(w|c) is the fraction of responses for chip c that used term w.
std::vector<WcsLanguage> parse_wcs(std::istream& term_file, std::istream* dict_file,
                                   const ChipGrid& grid, const ChipIdMap& chip_ids,
                                   const WcsParseOptions& opts = {});

/// Loads term.txt/dict.txt/chip_ids.tsv from a data directory. Throws
/// ErrorKind::data_missing when term.txt is absent.
std::vector<WcsLanguage> load_wcs_dir(const std::string& dir, const ChipGrid& grid,
                                      const WcsParseOptions& opts = {});

inline constexpr int kNumFixtureLanguages = 110;

/// Deterministic synthetic languages (K = 3..7) built from simulated speaker
/// responses around focal-color prototypes and parsed through parse_wcs.
/// Every returned system has complexity in [0.84, 2.65].
std::vector<WcsLanguage> fixture_languages(const ChipGrid& grid, int count = kNumFixtureLanguages);

/// Real WCS when `data_dir` holds it, fixtures otherwise. `used_fixtures`
/// reports which.
std::vector<WcsLanguage> reference_languages(const ChipGrid& grid,
                                             const std::optional<std::string>& data_dir,
                                             bool* used_fixtures = nullptr);

std::vector<NamingSystem> encoders_of(const std::vector<WcsLanguage>& langs);

}  // namespace nilcolor

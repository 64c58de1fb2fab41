// Copyright 2026 The Harmonkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV tables, target-model files, bundled models and dataset splitting.

#ifndef HARMONKIT_IO_HPP_
#define HARMONKIT_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "harmonkit/core.hpp"

namespace harmonkit {

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
  // Unquoted fields equal to one of these become null. Quoted fields are
  // always text. "na" and friends are deliberately not nulled by default.
  std::set<std::string> null_tokens = {""};
};

/// RFC 4180 parsing. A column is numeric iff every non-null cell parses as a
/// finite double. Throws kRaggedRow, kDuplicateHeader, kEncodingError.
Dataset parse_csv(std::string_view bytes, const CsvOptions& options = {});
/// As parse_csv; throws kIoError when the file cannot be read.
Dataset read_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Fields are quoted only when needed; empty text is written as "" so it
/// survives a round trip, nulls as empty fields.
std::string format_csv(const Dataset& data, char delimiter = ',');
void write_csv(const Dataset& data, const std::filesystem::path& path, char delimiter = ',');

/// Parses and validates a target-model JSON document. Throws kParseError and
/// kValidationError.
TargetModel parse_target_model(std::string_view json_text);

/// `name_or_path` is a file path, or the name of a bundled model ("gdc-subset"),
/// or a name resolved as <dir>/<name>.json over HARMONKIT_MODEL_PATH
/// (colon-separated). Throws kIoError when nothing matches.
TargetModel load_target_model(std::string_view name_or_path);

std::vector<std::string> bundled_model_names();

/// Seeded shuffle split. Each part keeps the original row order. The holdout
/// gets round(n * fraction) rows, clamped to [1, n - 1].
/// Throws kTooFewRows (n < 2) and kInvalidArgument (fraction outside (0,1)).
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double holdout_fraction,
                                          std::uint64_t seed);

/// Row indices chosen for the holdout, ascending. Exposed for tests.
std::vector<std::size_t> holdout_rows(std::size_t rows, double holdout_fraction,
                                      std::uint64_t seed);

}  // namespace harmonkit

#endif  // HARMONKIT_IO_HPP_

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

#ifndef HARMONKIT_TEXT_HPP_
#define HARMONKIT_TEXT_HPP_

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace harmonkit {

/// Lowercases ASCII letters, turns '_' '-' and whitespace runs into single
/// spaces, and trims. Non-ASCII bytes pass through unchanged.
std::string normalize_text(std::string_view raw);

struct NormalizedToken {
  std::vector<std::string> tokens;

  bool operator==(const NormalizedToken&) const = default;
};

/// Splits on any non-alphanumeric ASCII byte, on lower->upper camelCase
/// boundaries (checked before lowering) and on letter<->digit boundaries.
/// Tokens keep their order and duplicates.
NormalizedToken tokenize(std::string_view raw);

/// Distinct tokens of `raw`.
std::set<std::string> token_set(std::string_view raw);

/// The built-in null vocabulary, in normalized form:
/// "", "na", "n/a", "nan", "none", "null", "unknown", "not reported".
const std::set<std::string>& default_null_vocabulary();

bool is_null_like(std::string_view raw);
bool is_null_like(std::string_view raw, const std::set<std::string>& vocabulary);

}  // namespace harmonkit

#endif  // HARMONKIT_TEXT_HPP_

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

#ifndef HARMONKIT_VALUE_MATCHING_HPP_
#define HARMONKIT_VALUE_MATCHING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "harmonkit/core.hpp"
#include "harmonkit/embedding.hpp"

namespace harmonkit {

enum class ValueMethod { kExact, kLevenshtein, kTokenJaccard, kEmbedding, kNumericAffine, kAuto };

std::string_view value_method_name(ValueMethod method);
/// Throws kInvalidArgument.
ValueMethod parse_value_method(std::string_view name);

/// Textual and embedding methods only; throws kInvalidArgument for
/// numeric_affine and auto.
double similarity_value(ValueMethod method, std::string_view a, std::string_view b,
                        const Embedder& embedder = default_embedder());

/// Quantile-paired least squares fit of target = a * source + b. Both lists
/// are sorted; the longer one is linearly resampled to the shorter length.
/// Throws kDegenerateInput when either side has fewer than two distinct
/// values. Only increasing relations are identifiable this way.
AffineTransform fit_affine(std::span<const double> source_values,
                           std::span<const double> target_values);

struct ValueMatchOptions {
  double threshold = 0.15;
  // Above this many values on either side, fall back to per-value argmax.
  std::size_t assignment_limit = 200;
  const Embedder* embedder = nullptr;  // default_embedder() when null
};

/// Aligns the value domain of `source` to `target`. Null-like source values
/// stay unmatched. Throws kEmptyDomain and kIncompatibleKinds.
ValueMatchSet match_values(const Column& source, const TargetView& target,
                           ValueMethod method, const ValueMatchOptions& options = {});
ValueMatchSet match_values(const Column& source, const TargetAttribute& target,
                           ValueMethod method, const ValueMatchOptions& options = {});
ValueMatchSet match_values(const Column& source, const Column& target,
                           ValueMethod method, const ValueMatchOptions& options = {});

/// User correction: (re)maps one source value with origin user and score 1.
/// Throws kUnknownSourceValue, and kDomainViolation when the target is not
/// in the target domain unless `allow_outside_domain`.
ValueMatchSet set_value_match(const ValueMatchSet& set, std::string_view source_value,
                              std::string_view target_value,
                              bool allow_outside_domain = false);

/// Remaps every selected source value to constraint.forced_target with origin
/// constraint; other entries are untouched. Throws kDomainViolation.
ValueMatchSet apply_constraint(const ValueMatchSet& set, const Constraint& constraint);

}  // namespace harmonkit

#endif  // HARMONKIT_VALUE_MATCHING_HPP_

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

// Schema matching: a registry of pluggable attribute matchers, pairwise
// scoring, top-k ranking, optimal one-to-one matching and domain preview.

#ifndef HARMONKIT_SCHEMA_MATCHING_HPP_
#define HARMONKIT_SCHEMA_MATCHING_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "harmonkit/core.hpp"
#include "harmonkit/embedding.hpp"

namespace harmonkit {

namespace matchers {
inline constexpr std::string_view kNameLevenshtein = "name_levenshtein";
inline constexpr std::string_view kNameTokenJaccard = "name_token_jaccard";
inline constexpr std::string_view kValueOverlap = "value_overlap";
inline constexpr std::string_view kTfidfValues = "tfidf_values";
inline constexpr std::string_view kEmbeddingName = "embedding_name";
inline constexpr std::string_view kEnsemble = "ensemble";
}  // namespace matchers

struct MatcherDescriptor {
  std::string matcher_id;
  bool uses_values = false;
  std::set<ColumnKind> applicable_kinds;

  bool operator==(const MatcherDescriptor&) const = default;
};

/// A matcher result. Inapplicable matchers score 0 and are excluded from
/// the ensemble mean.
struct PairScore {
  double score = 0.0;
  bool applicable = true;
};

/// Per-task state shared by matchers: inverse document frequencies over
/// every source column and target attribute in the task, plus the embedder.
class MatchContext {
 public:
  MatchContext(std::span<const Column> sources, std::span<const TargetView> targets,
               const Embedder& embedder);

  /// ln(1 + N / df) for a normalized value.
  double idf(const std::string& normalized_value) const;
  std::size_t documents() const { return documents_; }
  const Embedder& embedder() const { return *embedder_; }

 private:
  std::unordered_map<std::string, std::size_t> document_frequency_;
  std::size_t documents_ = 0;
  const Embedder* embedder_;
};

using MatcherFn =
    std::function<PairScore(const Column&, const TargetView&, const MatchContext&)>;

class MatcherRegistry {
 public:
  /// The six built-in matchers, in a fixed order.
  static MatcherRegistry builtin(const Embedder& embedder = default_embedder());

  /// Throws kInvalidArgument on a duplicate or empty id.
  void add(MatcherDescriptor descriptor, MatcherFn fn);

  std::vector<MatcherDescriptor> list() const;
  bool contains(std::string_view matcher_id) const;
  /// Throws kUnknownMatcher.
  const MatcherDescriptor& descriptor(std::string_view matcher_id) const;
  const Embedder& embedder() const { return *embedder_; }

  MatchContext context(std::span<const Column> sources,
                       std::span<const TargetView> targets) const;

  /// Applies the kind check, then the matcher. Throws kUnknownMatcher.
  PairScore score(std::string_view matcher_id, const Column& source,
                  const TargetView& target, const MatchContext& context) const;

 private:
  struct Entry {
    MatcherDescriptor descriptor;
    MatcherFn fn;
  };
  std::vector<Entry> entries_;
  const Embedder* embedder_ = &default_embedder();
};

const MatcherRegistry& default_registry();

/// Scores one pair in a task consisting of just these two attributes.
PairScore score_pair(std::string_view matcher_id, const Column& source,
                     const TargetView& target,
                     const MatcherRegistry& registry = default_registry());
PairScore score_pair(std::string_view matcher_id, const Column& source,
                     const TargetAttribute& target,
                     const MatcherRegistry& registry = default_registry());
PairScore score_pair(std::string_view matcher_id, const Column& source,
                     const Column& target,
                     const MatcherRegistry& registry = default_registry());

/// Source columns x target attributes, scored within one shared task
/// context. Inapplicable pairs are 0.
Eigen::MatrixXd score_matrix(const Dataset& source, const MatchTarget& target,
                             std::string_view matcher_id,
                             const MatcherRegistry& registry = default_registry());

/// Top-k targets for one source attribute, score descending, ties broken by
/// normalized target name ascending.
std::vector<MatchCandidate> rank_schema_matches(
    const Dataset& source, const MatchTarget& target, std::string_view source_attribute,
    std::size_t k, std::string_view matcher_id,
    const MatcherRegistry& registry = default_registry());

struct SchemaMatchOptions {
  double floor = 0.05;
};

/// Optimal one-to-one assignment over the score matrix; entries are emitted
/// in source column order with status auto_ok.
SchemaMatchSet match_schema(const Dataset& source, const MatchTarget& target,
                            std::string_view matcher_id,
                            const SchemaMatchOptions& options = {},
                            const MatcherRegistry& registry = default_registry());

struct DomainPreview {
  std::string attribute;
  std::optional<std::string> description;
  std::optional<std::vector<std::string>> permissible_values;
  std::vector<std::string> sample_values;  // at most kMaxSamples
  ColumnKind kind = ColumnKind::kText;

  static constexpr std::size_t kMaxSamples = 20;
  bool operator==(const DomainPreview&) const = default;
};

/// Throws kUnknownAttribute.
DomainPreview preview_domain(const MatchTarget& target, std::string_view attribute);

std::vector<MatcherDescriptor> list_matchers(
    const MatcherRegistry& registry = default_registry());

}  // namespace harmonkit

#endif  // HARMONKIT_SCHEMA_MATCHING_HPP_

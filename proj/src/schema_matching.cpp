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

#include "harmonkit/schema_matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "harmonkit/assignment.hpp"
#include "harmonkit/similarity.hpp"
#include "harmonkit/text.hpp"

namespace harmonkit {
namespace {

std::set<std::string> normalized_set(const std::vector<std::string>& values) {
  std::set<std::string> out;
  for (const std::string& v : values) out.insert(normalize_text(v));
  return out;
}

std::set<std::string> source_value_set(const Column& source) {
  return normalized_set(source.distinct_values());
}

std::set<std::string> target_value_set(const TargetView& target) {
  return target.domain ? normalized_set(*target.domain) : std::set<std::string>{};
}

const std::set<ColumnKind> kAllKinds = {ColumnKind::kText, ColumnKind::kNumeric, ColumnKind::kMixed};
const std::set<ColumnKind> kTextKinds = {ColumnKind::kText, ColumnKind::kMixed};

PairScore name_levenshtein(const Column& s, const TargetView& t, const MatchContext&) {
  return {levenshtein_similarity(s.name(), t.name), true};
}

PairScore name_token_jaccard(const Column& s, const TargetView& t, const MatchContext&) {
  return {token_jaccard(s.name(), t.name), true};
}

PairScore value_overlap(const Column& s, const TargetView& t, const MatchContext&) {
  const auto a = source_value_set(s);
  const auto b = target_value_set(t);
  if (a.empty() || b.empty()) return {0.0, false};
  return {jaccard(a, b), true};
}

PairScore tfidf_values(const Column& s, const TargetView& t, const MatchContext& context) {
  if (t.kind == ColumnKind::kNumeric) return {0.0, false};
  const auto a = source_value_set(s);
  const auto b = target_value_set(t);
  if (a.empty() || b.empty()) return {0.0, false};
  // Dense vectors over the union vocabulary of the two documents.
  std::vector<std::string> vocabulary;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(vocabulary));
  Eigen::VectorXd va = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vocabulary.size()));
  Eigen::VectorXd vb = va;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    const double w = context.idf(vocabulary[i]);
    const auto k = static_cast<Eigen::Index>(i);
    if (a.count(vocabulary[i])) va[k] = w;
    if (b.count(vocabulary[i])) vb[k] = w;
  }
  return {std::clamp(cosine(va, vb), 0.0, 1.0), true};
}

PairScore embedding_name(const Column& s, const TargetView& t, const MatchContext& context) {
  return {embedding_similarity(context.embedder(), s.name(), t.name), true};
}

struct Builtin {
  MatcherDescriptor descriptor;
  PairScore (*fn)(const Column&, const TargetView&, const MatchContext&);
};

const std::vector<Builtin>& base_matchers() {
  static const std::vector<Builtin> matchers = {
      {{std::string(matchers::kNameLevenshtein), false, kAllKinds}, &name_levenshtein},
      {{std::string(matchers::kNameTokenJaccard), false, kAllKinds}, &name_token_jaccard},
      {{std::string(matchers::kValueOverlap), true, kAllKinds}, &value_overlap},
      {{std::string(matchers::kTfidfValues), true, kTextKinds}, &tfidf_values},
      {{std::string(matchers::kEmbeddingName), false, kAllKinds}, &embedding_name},
  };
  return matchers;
}

PairScore ensemble(const Column& s, const TargetView& t, const MatchContext& context) {
  double total = 0.0;
  int used = 0;
  for (const Builtin& m : base_matchers()) {
    if (!m.descriptor.applicable_kinds.count(s.kind())) continue;
    const PairScore r = m.fn(s, t, context);
    if (!r.applicable) continue;
    total += r.score;
    ++used;
  }
  if (used == 0) return {0.0, false};
  return {total / used, true};
}

}  // namespace

MatchContext::MatchContext(std::span<const Column> sources, std::span<const TargetView> targets,
                           const Embedder& embedder)
    : embedder_(&embedder) {
  auto add_document = [this](const std::set<std::string>& terms) {
    if (terms.empty()) return;
    ++documents_;
    for (const std::string& term : terms) ++document_frequency_[term];
  };
  for (const Column& column : sources) add_document(source_value_set(column));
  for (const TargetView& target : targets) add_document(target_value_set(target));
}

double MatchContext::idf(const std::string& normalized_value) const {
  const auto it = document_frequency_.find(normalized_value);
  const double df = it == document_frequency_.end() ? 1.0 : static_cast<double>(it->second);
  const double n = std::max<double>(static_cast<double>(documents_), 1.0);
  return std::log(1.0 + n / df);
}

MatcherRegistry MatcherRegistry::builtin(const Embedder& embedder) {
  MatcherRegistry registry;
  registry.embedder_ = &embedder;
  for (const Builtin& m : base_matchers()) registry.add(m.descriptor, m.fn);
  registry.add({std::string(matchers::kEnsemble), true, kAllKinds}, &ensemble);
  return registry;
}

void MatcherRegistry::add(MatcherDescriptor descriptor, MatcherFn fn) {
  if (descriptor.matcher_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "matcher id must not be empty");
  }
  if (contains(descriptor.matcher_id)) {
    throw Error(ErrorCode::kInvalidArgument, "matcher '" + descriptor.matcher_id + "' already registered");
  }
  if (!fn) throw Error(ErrorCode::kInvalidArgument, "matcher function must be callable");
  entries_.push_back({std::move(descriptor), std::move(fn)});
}

std::vector<MatcherDescriptor> MatcherRegistry::list() const {
  std::vector<MatcherDescriptor> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.push_back(e.descriptor);
  return out;
}

bool MatcherRegistry::contains(std::string_view matcher_id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.descriptor.matcher_id == matcher_id; });
}

const MatcherDescriptor& MatcherRegistry::descriptor(std::string_view matcher_id) const {
  for (const Entry& e : entries_) {
    if (e.descriptor.matcher_id == matcher_id) return e.descriptor;
  }
  throw Error(ErrorCode::kUnknownMatcher, "unknown matcher '" + std::string(matcher_id) + "'");
}

MatchContext MatcherRegistry::context(std::span<const Column> sources,
                                      std::span<const TargetView> targets) const {
  return MatchContext(sources, targets, *embedder_);
}

PairScore MatcherRegistry::score(std::string_view matcher_id, const Column& source,
                                 const TargetView& target, const MatchContext& context) const {
  for (const Entry& e : entries_) {
    if (e.descriptor.matcher_id != matcher_id) continue;
    if (!e.descriptor.applicable_kinds.count(source.kind())) return {0.0, false};
    PairScore r = e.fn(source, target, context);
    if (!r.applicable) return {0.0, false};
    r.score = std::clamp(r.score, 0.0, 1.0);
    return r;
  }
  throw Error(ErrorCode::kUnknownMatcher, "unknown matcher '" + std::string(matcher_id) + "'");
}

const MatcherRegistry& default_registry() {
  static const MatcherRegistry registry = MatcherRegistry::builtin();
  return registry;
}

PairScore score_pair(std::string_view matcher_id, const Column& source, const TargetView& target,
                     const MatcherRegistry& registry) {
  registry.descriptor(matcher_id);
  const MatchContext context =
      registry.context(std::span<const Column>(&source, 1), std::span<const TargetView>(&target, 1));
  return registry.score(matcher_id, source, target, context);
}

PairScore score_pair(std::string_view matcher_id, const Column& source, const TargetAttribute& target,
                     const MatcherRegistry& registry) {
  return score_pair(matcher_id, source, as_target(target), registry);
}

PairScore score_pair(std::string_view matcher_id, const Column& source, const Column& target,
                     const MatcherRegistry& registry) {
  return score_pair(matcher_id, source, as_target(target), registry);
}

Eigen::MatrixXd score_matrix(const Dataset& source, const MatchTarget& target,
                             std::string_view matcher_id, const MatcherRegistry& registry) {
  registry.descriptor(matcher_id);
  const std::vector<TargetView> targets = target_views(target);
  const MatchContext context = registry.context(source.columns(), targets);
  Eigen::MatrixXd scores(static_cast<Eigen::Index>(source.num_columns()),
                         static_cast<Eigen::Index>(targets.size()));
  for (std::size_t i = 0; i < source.num_columns(); ++i) {
    for (std::size_t j = 0; j < targets.size(); ++j) {
      scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          registry.score(matcher_id, source.columns()[i], targets[j], context).score;
    }
  }
  return scores;
}

std::vector<MatchCandidate> rank_schema_matches(const Dataset& source, const MatchTarget& target,
                                                std::string_view source_attribute, std::size_t k,
                                                std::string_view matcher_id,
                                                const MatcherRegistry& registry) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  registry.descriptor(matcher_id);
  const Column& column = source.column(source_attribute);
  const std::vector<TargetView> targets = target_views(target);
  const MatchContext context = registry.context(source.columns(), targets);

  struct Ranked {
    MatchCandidate candidate;
    std::string key;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(targets.size());
  for (const TargetView& t : targets) {
    const PairScore r = registry.score(matcher_id, column, t, context);
    ranked.push_back({{column.name(), t.name, r.score, std::string(matcher_id)}, normalize_text(t.name)});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.candidate.score != b.candidate.score) return a.candidate.score > b.candidate.score;
    if (a.key != b.key) return a.key < b.key;
    return a.candidate.target_attribute < b.candidate.target_attribute;
  });
  std::vector<MatchCandidate> out;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(ranked[i].candidate);
  return out;
}

SchemaMatchSet match_schema(const Dataset& source, const MatchTarget& target,
                            std::string_view matcher_id, const SchemaMatchOptions& options,
                            const MatcherRegistry& registry) {
  const Eigen::MatrixXd scores = score_matrix(source, target, matcher_id, registry);
  const std::vector<std::string> target_names = target_attribute_names(target);
  std::vector<SchemaMatchEntry> entries;
  for (const auto& [row, col] : assign_pairs(scores, options.floor)) {
    MatchCandidate candidate{source.columns()[static_cast<std::size_t>(row)].name(),
                             target_names[static_cast<std::size_t>(col)], scores(row, col),
                             std::string(matcher_id)};
    entries.push_back({std::move(candidate), MatchStatus::kAutoOk, std::nullopt});
  }
  return SchemaMatchSet(std::move(entries));
}

DomainPreview preview_domain(const MatchTarget& target, std::string_view attribute) {
  DomainPreview preview;
  preview.attribute = std::string(attribute);
  if (const auto* model = std::get_if<TargetModel>(&target)) {
    const TargetAttribute* a = model->find(attribute);
    if (a == nullptr) {
      throw Error(ErrorCode::kUnknownAttribute,
                  "unknown target attribute '" + std::string(attribute) + "'");
    }
    preview.description = a->description;
    preview.permissible_values = a->permissible_values;
    preview.kind = as_target(*a).kind;
    if (a->permissible_values) {
      const auto& values = *a->permissible_values;
      const std::size_t n = std::min(values.size(), DomainPreview::kMaxSamples);
      preview.sample_values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return preview;
  }
  const Column* column = std::get<Dataset>(target).find(attribute);
  if (column == nullptr) {
    throw Error(ErrorCode::kUnknownAttribute,
                "unknown target attribute '" + std::string(attribute) + "'");
  }
  preview.kind = column->kind();
  auto values = column->distinct_values();
  if (values.size() > DomainPreview::kMaxSamples) values.resize(DomainPreview::kMaxSamples);
  preview.sample_values = std::move(values);
  return preview;
}

std::vector<MatcherDescriptor> list_matchers(const MatcherRegistry& registry) {
  return registry.list();
}

}  // namespace harmonkit

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

#include "harmonkit/value_matching.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "harmonkit/assignment.hpp"
#include "harmonkit/similarity.hpp"
#include "harmonkit/text.hpp"

namespace harmonkit {

std::string_view value_method_name(ValueMethod method) {
  switch (method) {
    case ValueMethod::kExact: return "exact";
    case ValueMethod::kLevenshtein: return "levenshtein";
    case ValueMethod::kTokenJaccard: return "token_jaccard";
    case ValueMethod::kEmbedding: return "embedding";
    case ValueMethod::kNumericAffine: return "numeric_affine";
    case ValueMethod::kAuto: return "auto";
  }
  return "auto";
}

ValueMethod parse_value_method(std::string_view name) {
  for (ValueMethod m : {ValueMethod::kExact, ValueMethod::kLevenshtein, ValueMethod::kTokenJaccard,
                        ValueMethod::kEmbedding, ValueMethod::kNumericAffine, ValueMethod::kAuto}) {
    if (value_method_name(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown value method '" + std::string(name) + "'");
}

double similarity_value(ValueMethod method, std::string_view a, std::string_view b,
                        const Embedder& embedder) {
  switch (method) {
    case ValueMethod::kExact:
      return normalize_text(a) == normalize_text(b) ? 1.0 : 0.0;
    case ValueMethod::kLevenshtein:
      return levenshtein_similarity(a, b);
    case ValueMethod::kTokenJaccard:
      return token_jaccard(a, b);
    case ValueMethod::kEmbedding:
      return embedding_similarity(embedder, a, b);
    case ValueMethod::kNumericAffine:
    case ValueMethod::kAuto:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "similarity_value needs a textual or embedding method, got '" +
                  std::string(value_method_name(method)) + "'");
}

namespace {

std::size_t distinct_count(const std::vector<double>& sorted) {
  if (sorted.empty()) return 0;
  std::size_t n = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) n += sorted[i] != sorted[i - 1];
  return n;
}

// Linear interpolation of a sorted list at m evenly spaced quantiles.
Eigen::VectorXd resample(const std::vector<double>& sorted, std::size_t m) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(m));
  if (sorted.size() == m) {
    for (std::size_t i = 0; i < m; ++i) out[static_cast<Eigen::Index>(i)] = sorted[i];
    return out;
  }
  const double step = static_cast<double>(sorted.size() - 1) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const double pos = step * static_cast<double>(i);
    const auto lo = std::min(static_cast<std::size_t>(pos), sorted.size() - 1);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    out[static_cast<Eigen::Index>(i)] = sorted[lo] + frac * (sorted[hi] - sorted[lo]);
  }
  return out;
}

std::optional<std::string> domain_spelling(const std::optional<std::vector<std::string>>& domain,
                                           std::string_view value) {
  if (!domain) return std::string(value);
  const std::string key = normalize_text(value);
  for (const std::string& d : *domain) {
    if (normalize_text(d) == key) return d;
  }
  return std::nullopt;
}

// Canonical spelling of `value` among the set's source values.
std::optional<std::size_t> source_position(const ValueMatchSet& set, std::string_view value) {
  const std::string key = normalize_text(value);
  for (std::size_t i = 0; i < set.source_values.size(); ++i) {
    if (normalize_text(set.source_values[i]) == key) return i;
  }
  return std::nullopt;
}

// Replaces or inserts a match, keeping matches in source_values order.
void put_match(ValueMatchSet& set, std::size_t position, ValueMatch match) {
  const std::string key = normalize_text(set.source_values[position]);
  for (ValueMatch& m : set.matches) {
    if (normalize_text(m.source_value) == key) {
      m = std::move(match);
      return;
    }
  }
  auto it = set.matches.begin();
  while (it != set.matches.end() && *source_position(set, it->source_value) < position) ++it;
  set.matches.insert(it, std::move(match));
}

std::vector<std::string> normalized_distinct(const std::vector<std::string>& values) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const std::string& v : values) {
    if (seen.insert(normalize_text(v)).second) out.push_back(v);
  }
  return out;
}

}  // namespace

AffineTransform fit_affine(std::span<const double> source_values, std::span<const double> target_values) {
  std::vector<double> xs(source_values.begin(), source_values.end());
  std::vector<double> ys(target_values.begin(), target_values.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  if (distinct_count(xs) < 2 || distinct_count(ys) < 2) {
    throw Error(ErrorCode::kDegenerateInput, "fit_affine needs at least two distinct values on each side");
  }
  const std::size_t m = std::min(xs.size(), ys.size());
  const Eigen::VectorXd x = resample(xs, m);
  const Eigen::VectorXd y = resample(ys, m);

  Eigen::MatrixXd design(static_cast<Eigen::Index>(m), 2);
  design.col(0) = x;
  design.col(1).setOnes();
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);

  AffineTransform t;
  t.a = coef[0];
  t.b = coef[1];
  // 1 - SSres/SStot equals the squared Pearson correlation for a least
  // squares fit with intercept.
  const double ss_tot = (y.array() - y.mean()).square().sum();
  const double ss_res = (y - design * coef).squaredNorm();
  t.r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 0.0;
  if (t.a == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "fitted slope is zero");
  }
  return t;
}

ValueMatchSet match_values(const Column& source, const TargetView& target, ValueMethod method,
                           const ValueMatchOptions& options) {
  const Embedder& embedder = options.embedder ? *options.embedder : default_embedder();
  if (method == ValueMethod::kAuto) {
    method = source.kind() == ColumnKind::kNumeric && target.kind == ColumnKind::kNumeric
                 ? ValueMethod::kNumericAffine
                 : ValueMethod::kTokenJaccard;
  }

  ValueMatchSet set;
  set.source_attribute = source.name();
  set.target_attribute = target.name;
  set.source_values = normalized_distinct(source.distinct_values());

  if (method == ValueMethod::kNumericAffine) {
    if (source.kind() != ColumnKind::kNumeric || target.kind != ColumnKind::kNumeric) {
      throw Error(ErrorCode::kIncompatibleKinds,
                  "numeric_affine needs numeric columns on both sides ('" + source.name() + "' is " +
                      std::string(column_kind_name(source.kind())) + ", '" + target.name + "' is " +
                      std::string(column_kind_name(target.kind)) + ")");
    }
    if (target.numbers.empty()) {
      throw Error(ErrorCode::kEmptyDomain, "target '" + target.name + "' has no numeric values");
    }
    const std::vector<double> xs = source.numbers();
    const AffineTransform t = fit_affine(xs, target.numbers);
    set.transform = t;
    for (const std::string& v : set.source_values) {
      const double x = *parse_number(v);
      set.matches.push_back({v, format_number(t(x)), t.r2, ValueOrigin::kAuto});
    }
    return set;
  }

  if (!target.domain || target.domain->empty()) {
    throw Error(ErrorCode::kEmptyDomain, "target '" + target.name + "' has no value domain");
  }
  const std::vector<std::string> domain = normalized_distinct(*target.domain);
  set.target_domain = *target.domain;

  std::vector<std::size_t> rows;  // positions in source_values that take part
  for (std::size_t i = 0; i < set.source_values.size(); ++i) {
    if (!is_null_like(set.source_values[i])) rows.push_back(i);
  }
  if (rows.empty()) return set;

  Eigen::MatrixXd scores(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(domain.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < domain.size(); ++c) {
      scores(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          similarity_value(method, set.source_values[rows[r]], domain[c], embedder);
    }
  }

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  if (rows.size() <= options.assignment_limit && domain.size() <= options.assignment_limit) {
    pairs = assign_pairs(scores, options.threshold);
  } else {
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
      Eigen::Index best = 0;
      const double top = scores.row(r).maxCoeff(&best);
      if (top >= options.threshold && top > 0.0) pairs.emplace_back(r, best);
    }
  }
  for (const auto& [r, c] : pairs) {
    set.matches.push_back({set.source_values[rows[static_cast<std::size_t>(r)]],
                           domain[static_cast<std::size_t>(c)], scores(r, c), ValueOrigin::kAuto});
  }
  return set;
}

ValueMatchSet match_values(const Column& source, const TargetAttribute& target, ValueMethod method,
                           const ValueMatchOptions& options) {
  return match_values(source, as_target(target), method, options);
}

ValueMatchSet match_values(const Column& source, const Column& target, ValueMethod method,
                           const ValueMatchOptions& options) {
  return match_values(source, as_target(target), method, options);
}

ValueMatchSet set_value_match(const ValueMatchSet& set, std::string_view source_value,
                              std::string_view target_value, bool allow_outside_domain) {
  const auto position = source_position(set, source_value);
  if (!position) {
    throw Error(ErrorCode::kUnknownSourceValue, "'" + std::string(source_value) +
                                                    "' is not a value of '" + set.source_attribute + "'");
  }
  auto spelling = domain_spelling(set.target_domain, target_value);
  if (!spelling) {
    if (!allow_outside_domain) {
      throw Error(ErrorCode::kDomainViolation, "'" + std::string(target_value) +
                                                   "' is not a permissible value of '" +
                                                   set.target_attribute + "'");
    }
    spelling = std::string(target_value);
  }
  ValueMatchSet next = set;
  // An explicit edit turns a numeric transform into an explicit value map.
  next.transform.reset();
  put_match(next, *position, {set.source_values[*position], *spelling, 1.0, ValueOrigin::kUser});
  return next;
}

ValueMatchSet apply_constraint(const ValueMatchSet& set, const Constraint& constraint) {
  const auto spelling = domain_spelling(set.target_domain, constraint.forced_target);
  if (!spelling) {
    throw Error(ErrorCode::kDomainViolation, "constraint target '" + constraint.forced_target +
                                                 "' is not a permissible value of '" +
                                                 set.target_attribute + "'");
  }
  ValueMatchSet next = set;
  bool changed = false;
  for (std::size_t i = 0; i < set.source_values.size(); ++i) {
    if (!constraint.selects(set.source_values[i])) continue;
    put_match(next, i, {set.source_values[i], *spelling, 1.0, ValueOrigin::kConstraint});
    changed = true;
  }
  if (changed) next.transform.reset();
  return next;
}

}  // namespace harmonkit

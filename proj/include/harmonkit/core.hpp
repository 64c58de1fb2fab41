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

// Shared domain types: tables, target models, schema and value matches,
// constraints. Everything here is a value type; "mutations" return copies.

#ifndef HARMONKIT_CORE_HPP_
#define HARMONKIT_CORE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "harmonkit/error.hpp"

namespace harmonkit {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_number(double value);

/// Parses a complete string as a finite double. Rejects "nan", "inf",
/// leading/trailing whitespace and partial matches.
std::optional<double> parse_number(std::string_view text);

// ---------------------------------------------------------------------------
// Tabular data

class Cell {
 public:
  Cell() = default;

  static Cell null() { return Cell(); }
  static Cell text(std::string value);
  /// Throws kInvalidArgument for NaN or infinities.
  static Cell number(double value);

  bool is_null() const { return value_.index() == 0; }
  bool is_text() const { return value_.index() == 1; }
  bool is_number() const { return value_.index() == 2; }

  const std::string& as_text() const { return std::get<std::string>(value_); }
  double as_number() const { return std::get<double>(value_); }

  /// Text verbatim, numbers via format_number, null as "".
  std::string to_string() const;

  bool operator==(const Cell&) const = default;

 private:
  std::variant<std::monostate, std::string, double> value_;
};

enum class ColumnKind { kText, kNumeric, kMixed };

std::string_view column_kind_name(ColumnKind kind);
ColumnKind parse_column_kind(std::string_view name);

class Column {
 public:
  Column() = default;
  Column(std::string name, std::vector<Cell> values);

  const std::string& name() const { return name_; }
  const std::vector<Cell>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  // A column with no non-null cells reports kText.
  ColumnKind kind() const { return kind_; }

  /// Non-null cells as strings, exact-distinct, in first-appearance order.
  std::vector<std::string> distinct_values() const;
  /// Non-null numeric cells in row order.
  std::vector<double> numbers() const;

  bool operator==(const Column& other) const {
    return name_ == other.name_ && values_ == other.values_;
  }

 private:
  std::string name_;
  std::vector<Cell> values_;
  ColumnKind kind_ = ColumnKind::kText;
};

ColumnKind derive_kind(std::span<const Cell> values);

class Dataset {
 public:
  Dataset() = default;
  /// Throws kDuplicateAttribute on repeated names and kInvalidArgument when
  /// column lengths differ.
  explicit Dataset(std::vector<Column> columns);

  const std::vector<Column>& columns() const { return columns_; }
  std::size_t num_columns() const { return columns_.size(); }
  std::size_t num_rows() const {
    return columns_.empty() ? 0 : columns_.front().size();
  }
  bool empty() const { return columns_.empty(); }

  const Column* find(std::string_view name) const;
  /// Throws kUnknownAttribute.
  const Column& column(std::string_view name) const;
  std::vector<std::string> column_names() const;

  /// Rows at `rows`, in the given order.
  Dataset select_rows(std::span<const std::size_t> rows) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<Column> columns_;
};

// ---------------------------------------------------------------------------
// Target data models

enum class ValueKind { kCategorical, kNumeric, kFreeText };

std::string_view value_kind_name(ValueKind kind);
ValueKind parse_value_kind(std::string_view name);

struct TargetAttribute {
  std::string name;
  std::optional<std::string> description;
  std::optional<std::vector<std::string>> permissible_values;
  ValueKind value_kind = ValueKind::kFreeText;

  bool operator==(const TargetAttribute&) const = default;
};

class TargetModel {
 public:
  TargetModel() = default;
  /// Validates every attribute; throws kValidationError naming all offending
  /// attributes at once.
  TargetModel(std::string model_name, std::vector<TargetAttribute> attributes);

  const std::string& model_name() const { return model_name_; }
  const std::vector<TargetAttribute>& attributes() const { return attributes_; }
  const TargetAttribute* find(std::string_view name) const;

  bool operator==(const TargetModel&) const = default;

 private:
  std::string model_name_;
  std::vector<TargetAttribute> attributes_;
};

using MatchTarget = std::variant<Dataset, TargetModel>;

/// Uniform read-only view of one target attribute, whether it came from a
/// table column or a data-model attribute.
struct TargetView {
  std::string name;
  std::optional<std::string> description;
  // Permissible values (model) or distinct non-null values (table). Absent
  // when the attribute has no enumerable domain.
  std::optional<std::vector<std::string>> domain;
  ColumnKind kind = ColumnKind::kText;
  bool from_model = false;
  std::vector<double> numbers;  // numeric table columns only
};

TargetView as_target(const Column& column);
TargetView as_target(const TargetAttribute& attribute);
std::vector<TargetView> target_views(const MatchTarget& target);
/// Throws kUnknownAttribute.
TargetView target_view(const MatchTarget& target, std::string_view name);
std::vector<std::string> target_attribute_names(const MatchTarget& target);
/// Model name for model targets, nullopt for tables.
std::optional<std::string> target_model_name(const MatchTarget& target);

// ---------------------------------------------------------------------------
// Schema matches

struct MatchCandidate {
  std::string source_attribute;
  std::string target_attribute;
  double score = 0.0;
  std::string matcher_id;

  bool operator==(const MatchCandidate&) const = default;
};

enum class MatchStatus { kAutoOk, kAiCorrected, kUserEdited, kAccepted, kRejected };

std::string_view match_status_name(MatchStatus status);
MatchStatus parse_match_status(std::string_view name);

struct SchemaMatchEntry {
  MatchCandidate candidate;
  MatchStatus status = MatchStatus::kAutoOk;
  std::optional<std::string> reason;

  bool operator==(const SchemaMatchEntry&) const = default;
};

/// One-to-one attribute correspondences. At most one entry per source
/// attribute and at most one non-rejected entry per target attribute.
class SchemaMatchSet {
 public:
  SchemaMatchSet() = default;
  /// Throws kOneToOneViolation when the invariant does not hold.
  explicit SchemaMatchSet(std::vector<SchemaMatchEntry> entries);

  const std::vector<SchemaMatchEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const SchemaMatchEntry* find(std::string_view source_attribute) const;

  /// Throws kUnknownAttribute when no entry exists for the source attribute.
  SchemaMatchSet with_status(std::string_view source_attribute, MatchStatus status,
                             std::optional<std::string> reason = std::nullopt) const;
  /// Replaces the entry for candidate.source_attribute, or appends it.
  SchemaMatchSet with_candidate(MatchCandidate candidate, MatchStatus status,
                                std::optional<std::string> reason = std::nullopt) const;

  bool operator==(const SchemaMatchSet&) const = default;

 private:
  std::vector<SchemaMatchEntry> entries_;
};

// ---------------------------------------------------------------------------
// Value matches

/// target = a * source + b, with r2 the squared correlation of the fit.
struct AffineTransform {
  double a = 1.0;
  double b = 0.0;
  double r2 = 1.0;

  double operator()(double x) const { return a * x + b; }
  bool operator==(const AffineTransform&) const = default;
};

enum class ValueOrigin { kAuto, kUser, kConstraint };

std::string_view value_origin_name(ValueOrigin origin);
ValueOrigin parse_value_origin(std::string_view name);

struct ValueMatch {
  std::string source_value;
  std::string target_value;
  double score = 0.0;
  ValueOrigin origin = ValueOrigin::kAuto;

  bool operator==(const ValueMatch&) const = default;
};

struct ValueMatchSet {
  std::string source_attribute;
  std::string target_attribute;
  // Distinct source values (normalized-distinct, first spelling kept), in
  // column order. Includes values left unmatched.
  std::vector<std::string> source_values;
  // Permissible or observed target values; nullopt for open domains.
  std::optional<std::vector<std::string>> target_domain;
  // Ordered by position of source_value in source_values.
  std::vector<ValueMatch> matches;
  std::optional<AffineTransform> transform;

  const ValueMatch* find(std::string_view source_value) const;
  std::vector<std::string> unmatched() const;
  /// Throws kInvalidArgument when matches repeat a normalized source value,
  /// reference a value outside source_values, or carry an out-of-range score.
  void validate() const;

  bool operator==(const ValueMatchSet&) const = default;
};

struct NullLikeSelector {
  bool operator==(const NullLikeSelector&) const = default;
};
struct ValueListSelector {
  std::vector<std::string> values;
  bool operator==(const ValueListSelector&) const = default;
};
// ECMAScript pattern, full match, case-insensitive.
struct RegexSelector {
  std::string pattern;
  bool operator==(const RegexSelector&) const = default;
};

using ConstraintSelector = std::variant<NullLikeSelector, ValueListSelector, RegexSelector>;

struct Constraint {
  ConstraintSelector selector;
  std::string forced_target;

  bool selects(std::string_view source_value) const;
  bool operator==(const Constraint&) const = default;
};

}  // namespace harmonkit

#endif  // HARMONKIT_CORE_HPP_

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

#include "harmonkit/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>
#include <system_error>
#include <unordered_set>

#include "harmonkit/text.hpp"

namespace harmonkit {

std::string format_number(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

// ---------------------------------------------------------------------------

Cell Cell::text(std::string value) {
  Cell cell;
  cell.value_ = std::move(value);
  return cell;
}

Cell Cell::number(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument, "cell numbers must be finite");
  }
  Cell cell;
  cell.value_ = value;
  return cell;
}

std::string Cell::to_string() const {
  if (is_text()) return as_text();
  if (is_number()) return format_number(as_number());
  return {};
}

std::string_view column_kind_name(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kText: return "text";
    case ColumnKind::kNumeric: return "numeric";
    case ColumnKind::kMixed: return "mixed";
  }
  return "text";
}

ColumnKind parse_column_kind(std::string_view name) {
  if (name == "text") return ColumnKind::kText;
  if (name == "numeric") return ColumnKind::kNumeric;
  if (name == "mixed") return ColumnKind::kMixed;
  throw Error(ErrorCode::kInvalidArgument, "unknown column kind '" + std::string(name) + "'");
}

ColumnKind derive_kind(std::span<const Cell> values) {
  bool any_text = false;
  bool any_number = false;
  for (const Cell& cell : values) {
    any_text = any_text || cell.is_text();
    any_number = any_number || cell.is_number();
  }
  if (any_text && any_number) return ColumnKind::kMixed;
  if (any_number) return ColumnKind::kNumeric;
  return ColumnKind::kText;
}

Column::Column(std::string name, std::vector<Cell> values)
    : name_(std::move(name)), values_(std::move(values)), kind_(derive_kind(values_)) {}

std::vector<std::string> Column::distinct_values() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const Cell& cell : values_) {
    if (cell.is_null()) continue;
    std::string s = cell.to_string();
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> Column::numbers() const {
  std::vector<double> out;
  for (const Cell& cell : values_) {
    if (cell.is_number()) out.push_back(cell.as_number());
  }
  return out;
}

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::unordered_set<std::string> names;
  for (const Column& column : columns_) {
    if (!names.insert(column.name()).second) {
      throw Error(ErrorCode::kDuplicateAttribute, "duplicate column name '" + column.name() + "'");
    }
    if (column.size() != columns_.front().size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "column '" + column.name() + "' has " + std::to_string(column.size()) +
                      " rows, expected " + std::to_string(columns_.front().size()));
    }
  }
}

const Column* Dataset::find(std::string_view name) const {
  for (const Column& column : columns_) {
    if (column.name() == name) return &column;
  }
  return nullptr;
}

const Column& Dataset::column(std::string_view name) const {
  if (const Column* c = find(name)) return *c;
  throw Error(ErrorCode::kUnknownAttribute, "unknown source attribute '" + std::string(name) + "'");
}

std::vector<std::string> Dataset::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const Column& column : columns_) names.push_back(column.name());
  return names;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (const Column& column : columns_) {
    std::vector<Cell> values;
    values.reserve(rows.size());
    for (std::size_t r : rows) {
      if (r >= column.size()) {
        throw Error(ErrorCode::kInvalidArgument, "row index " + std::to_string(r) + " out of range");
      }
      values.push_back(column.values()[r]);
    }
    out.emplace_back(column.name(), std::move(values));
  }
  return Dataset(std::move(out));
}

// ---------------------------------------------------------------------------

std::string_view value_kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::kCategorical: return "categorical";
    case ValueKind::kNumeric: return "numeric";
    case ValueKind::kFreeText: return "free_text";
  }
  return "free_text";
}

ValueKind parse_value_kind(std::string_view name) {
  if (name == "categorical") return ValueKind::kCategorical;
  if (name == "numeric") return ValueKind::kNumeric;
  if (name == "free_text") return ValueKind::kFreeText;
  throw Error(ErrorCode::kValidationError, "unknown value_kind '" + std::string(name) + "'");
}

namespace {

std::optional<std::string> attribute_problem(const TargetAttribute& attribute) {
  if (attribute.name.empty()) return "empty name";
  if (attribute.permissible_values) {
    const auto& values = *attribute.permissible_values;
    if (values.empty()) return "empty permissible_values";
    std::set<std::string> seen;
    for (const std::string& v : values) {
      if (!seen.insert(normalize_text(v)).second) {
        return "permissible value '" + v + "' repeats after normalization";
      }
    }
  } else if (attribute.value_kind == ValueKind::kCategorical) {
    return "categorical without permissible_values";
  }
  return std::nullopt;
}

}  // namespace

TargetModel::TargetModel(std::string model_name, std::vector<TargetAttribute> attributes)
    : model_name_(std::move(model_name)), attributes_(std::move(attributes)) {
  std::vector<std::string> problems;
  std::set<std::string> names;
  for (const TargetAttribute& attribute : attributes_) {
    if (!names.insert(attribute.name).second) {
      problems.push_back(attribute.name + ": duplicate name");
    }
    if (auto problem = attribute_problem(attribute)) {
      problems.push_back(attribute.name + ": " + *problem);
    }
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid target model '" << model_name_ << "': ";
    for (std::size_t i = 0; i < problems.size(); ++i) msg << (i ? "; " : "") << problems[i];
    throw Error(ErrorCode::kValidationError, msg.str());
  }
}

const TargetAttribute* TargetModel::find(std::string_view name) const {
  for (const TargetAttribute& attribute : attributes_) {
    if (attribute.name == name) return &attribute;
  }
  return nullptr;
}

TargetView as_target(const Column& column) {
  TargetView view;
  view.name = column.name();
  view.kind = column.kind();
  view.from_model = false;
  auto values = column.distinct_values();
  if (!values.empty()) view.domain = std::move(values);
  if (column.kind() == ColumnKind::kNumeric) view.numbers = column.numbers();
  return view;
}

TargetView as_target(const TargetAttribute& attribute) {
  TargetView view;
  view.name = attribute.name;
  view.description = attribute.description;
  view.domain = attribute.permissible_values;
  view.kind = attribute.value_kind == ValueKind::kNumeric ? ColumnKind::kNumeric : ColumnKind::kText;
  view.from_model = true;
  if (view.kind == ColumnKind::kNumeric && view.domain) {
    for (const std::string& v : *view.domain) {
      if (auto x = parse_number(v)) view.numbers.push_back(*x);
    }
  }
  return view;
}

std::vector<TargetView> target_views(const MatchTarget& target) {
  std::vector<TargetView> views;
  if (const auto* table = std::get_if<Dataset>(&target)) {
    for (const Column& column : table->columns()) views.push_back(as_target(column));
  } else {
    for (const TargetAttribute& a : std::get<TargetModel>(target).attributes()) {
      views.push_back(as_target(a));
    }
  }
  return views;
}

TargetView target_view(const MatchTarget& target, std::string_view name) {
  if (const auto* table = std::get_if<Dataset>(&target)) {
    if (const Column* column = table->find(name)) return as_target(*column);
  } else if (const auto* a = std::get<TargetModel>(target).find(name)) {
    return as_target(*a);
  }
  throw Error(ErrorCode::kUnknownAttribute, "unknown target attribute '" + std::string(name) + "'");
}

std::vector<std::string> target_attribute_names(const MatchTarget& target) {
  if (const auto* table = std::get_if<Dataset>(&target)) return table->column_names();
  std::vector<std::string> names;
  for (const TargetAttribute& a : std::get<TargetModel>(target).attributes()) names.push_back(a.name);
  return names;
}

std::optional<std::string> target_model_name(const MatchTarget& target) {
  if (const auto* model = std::get_if<TargetModel>(&target)) return model->model_name();
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string_view match_status_name(MatchStatus status) {
  switch (status) {
    case MatchStatus::kAutoOk: return "auto_ok";
    case MatchStatus::kAiCorrected: return "ai_corrected";
    case MatchStatus::kUserEdited: return "user_edited";
    case MatchStatus::kAccepted: return "accepted";
    case MatchStatus::kRejected: return "rejected";
  }
  return "auto_ok";
}

MatchStatus parse_match_status(std::string_view name) {
  if (name == "auto_ok") return MatchStatus::kAutoOk;
  if (name == "ai_corrected") return MatchStatus::kAiCorrected;
  if (name == "user_edited") return MatchStatus::kUserEdited;
  if (name == "accepted") return MatchStatus::kAccepted;
  if (name == "rejected") return MatchStatus::kRejected;
  throw Error(ErrorCode::kInvalidArgument, "unknown match status '" + std::string(name) + "'");
}

SchemaMatchSet::SchemaMatchSet(std::vector<SchemaMatchEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string> sources;
  std::set<std::string> targets;
  for (const SchemaMatchEntry& entry : entries_) {
    const MatchCandidate& c = entry.candidate;
    if (!(c.score >= 0.0 && c.score <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "match score for '" + c.source_attribute +
                                                   "' outside [0, 1]");
    }
    if (!sources.insert(c.source_attribute).second) {
      throw Error(ErrorCode::kOneToOneViolation,
                  "source attribute '" + c.source_attribute + "' matched twice");
    }
    if (entry.status != MatchStatus::kRejected && !targets.insert(c.target_attribute).second) {
      throw Error(ErrorCode::kOneToOneViolation,
                  "target attribute '" + c.target_attribute + "' already matched");
    }
  }
}

const SchemaMatchEntry* SchemaMatchSet::find(std::string_view source_attribute) const {
  for (const SchemaMatchEntry& entry : entries_) {
    if (entry.candidate.source_attribute == source_attribute) return &entry;
  }
  return nullptr;
}

SchemaMatchSet SchemaMatchSet::with_status(std::string_view source_attribute, MatchStatus status,
                                           std::optional<std::string> reason) const {
  std::vector<SchemaMatchEntry> next = entries_;
  for (SchemaMatchEntry& entry : next) {
    if (entry.candidate.source_attribute == source_attribute) {
      entry.status = status;
      if (reason) entry.reason = std::move(reason);
      return SchemaMatchSet(std::move(next));
    }
  }
  throw Error(ErrorCode::kUnknownAttribute,
              "no match for source attribute '" + std::string(source_attribute) + "'");
}

SchemaMatchSet SchemaMatchSet::with_candidate(MatchCandidate candidate, MatchStatus status,
                                              std::optional<std::string> reason) const {
  std::vector<SchemaMatchEntry> next = entries_;
  for (SchemaMatchEntry& entry : next) {
    if (entry.candidate.source_attribute == candidate.source_attribute) {
      entry = SchemaMatchEntry{std::move(candidate), status, std::move(reason)};
      return SchemaMatchSet(std::move(next));
    }
  }
  next.push_back(SchemaMatchEntry{std::move(candidate), status, std::move(reason)});
  return SchemaMatchSet(std::move(next));
}

// ---------------------------------------------------------------------------

std::string_view value_origin_name(ValueOrigin origin) {
  switch (origin) {
    case ValueOrigin::kAuto: return "auto";
    case ValueOrigin::kUser: return "user";
    case ValueOrigin::kConstraint: return "constraint";
  }
  return "auto";
}

ValueOrigin parse_value_origin(std::string_view name) {
  if (name == "auto") return ValueOrigin::kAuto;
  if (name == "user") return ValueOrigin::kUser;
  if (name == "constraint") return ValueOrigin::kConstraint;
  throw Error(ErrorCode::kInvalidArgument, "unknown value origin '" + std::string(name) + "'");
}

const ValueMatch* ValueMatchSet::find(std::string_view source_value) const {
  const std::string key = normalize_text(source_value);
  for (const ValueMatch& match : matches) {
    if (normalize_text(match.source_value) == key) return &match;
  }
  return nullptr;
}

std::vector<std::string> ValueMatchSet::unmatched() const {
  std::vector<std::string> out;
  for (const std::string& value : source_values) {
    if (find(value) == nullptr) out.push_back(value);
  }
  return out;
}

void ValueMatchSet::validate() const {
  std::vector<std::string> order;
  order.reserve(source_values.size());
  for (const std::string& v : source_values) order.push_back(normalize_text(v));
  std::set<std::string> seen;
  std::size_t last_position = 0;
  for (const ValueMatch& match : matches) {
    const std::string key = normalize_text(match.source_value);
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "source value '" + match.source_value + "' matched twice");
    }
    const auto it = std::find(order.begin(), order.end(), key);
    if (it == order.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "matched value '" + match.source_value + "' is not a source value");
    }
    const auto position = static_cast<std::size_t>(it - order.begin());
    if (seen.size() > 1 && position < last_position) {
      throw Error(ErrorCode::kInvalidArgument, "value matches out of source order");
    }
    last_position = position;
    if (!(match.score >= 0.0 && match.score <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "value match score outside [0, 1]");
    }
    if (match.origin != ValueOrigin::kAuto && match.score != 1.0) {
      throw Error(ErrorCode::kInvalidArgument, "user and constraint matches must score 1");
    }
  }
}

bool Constraint::selects(std::string_view source_value) const {
  if (std::holds_alternative<NullLikeSelector>(selector)) return is_null_like(source_value);
  if (const auto* list = std::get_if<ValueListSelector>(&selector)) {
    const std::string key = normalize_text(source_value);
    return std::any_of(list->values.begin(), list->values.end(),
                       [&](const std::string& v) { return normalize_text(v) == key; });
  }
  const auto& pattern = std::get<RegexSelector>(selector).pattern;
  try {
    const std::regex re(pattern, std::regex::ECMAScript | std::regex::icase);
    return std::regex_match(source_value.begin(), source_value.end(), re);
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::kInvalidArgument, "invalid constraint regex '" + pattern + "': " + e.what());
  }
}

}  // namespace harmonkit

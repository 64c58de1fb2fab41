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

#include "harmonkit/json_codec.hpp"

namespace harmonkit {

namespace {

[[noreturn]] void bad(std::string_view field, std::string_view what) {
  throw Error(ErrorCode::kParseError, "field '" + std::string(field) + "': " + std::string(what));
}

const Json& require(const Json& j, std::string_view field) {
  if (!j.is_object()) bad(field, "expected an object");
  const auto it = j.find(std::string(field));
  if (it == j.end()) bad(field, "missing");
  return *it;
}

std::string get_string(const Json& j, std::string_view field) {
  const Json& v = require(j, field);
  if (!v.is_string()) bad(field, "expected a string");
  return v.get<std::string>();
}

double get_number(const Json& j, std::string_view field) {
  const Json& v = require(j, field);
  if (!v.is_number()) bad(field, "expected a number");
  return v.get<double>();
}

std::optional<std::string> get_optional_string(const Json& j, std::string_view field) {
  const auto it = j.find(std::string(field));
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad(field, "expected a string");
  return it->get<std::string>();
}

std::vector<std::string> string_list(const Json& v, std::string_view field) {
  if (!v.is_array()) bad(field, "expected a list of strings");
  std::vector<std::string> out;
  for (const Json& s : v) {
    if (!s.is_string()) bad(field, "expected a list of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

std::optional<std::vector<std::string>> get_optional_list(const Json& j, std::string_view field) {
  const auto it = j.find(std::string(field));
  if (it == j.end() || it->is_null()) return std::nullopt;
  return string_list(*it, field);
}

Json optional_list(const std::optional<std::vector<std::string>>& list) {
  return list ? Json(*list) : Json(nullptr);
}

Json optional_string(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

template <typename Fn>
auto translate(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) throw Error(ErrorCode::kParseError, e.what());
    throw;
  }
}

}  // namespace

void to_json(Json& j, const Cell& cell) {
  if (cell.is_null()) {
    j = nullptr;
  } else if (cell.is_text()) {
    j = cell.as_text();
  } else {
    j = cell.as_number();
  }
}

void from_json(const Json& j, Cell& cell) {
  if (j.is_null()) {
    cell = Cell::null();
  } else if (j.is_string()) {
    cell = Cell::text(j.get<std::string>());
  } else if (j.is_number()) {
    cell = Cell::number(j.get<double>());
  } else {
    throw Error(ErrorCode::kParseError, "cell must be null, a string or a number");
  }
}

void to_json(Json& j, const Column& column) {
  j = Json::object();
  j["name"] = column.name();
  j["kind"] = column_kind_name(column.kind());
  j["values"] = column.values();
}

void from_json(const Json& j, Column& column) {
  const std::string name = get_string(j, "name");
  const Json& values = require(j, "values");
  if (!values.is_array()) bad("values", "expected a list");
  std::vector<Cell> cells;
  cells.reserve(values.size());
  for (const Json& v : values) cells.push_back(v.get<Cell>());
  column = Column(name, std::move(cells));
}

void to_json(Json& j, const Dataset& data) {
  j = Json::object();
  j["columns"] = data.columns();
}

void from_json(const Json& j, Dataset& data) {
  const Json& columns = require(j, "columns");
  if (!columns.is_array()) bad("columns", "expected a list");
  std::vector<Column> out;
  for (const Json& c : columns) out.push_back(c.get<Column>());
  data = Dataset(std::move(out));
}

void to_json(Json& j, const TargetAttribute& attribute) {
  j = Json::object();
  j["name"] = attribute.name;
  j["description"] = optional_string(attribute.description);
  j["permissible_values"] = optional_list(attribute.permissible_values);
  j["value_kind"] = value_kind_name(attribute.value_kind);
}

void from_json(const Json& j, TargetAttribute& attribute) {
  attribute.name = get_string(j, "name");
  attribute.description = get_optional_string(j, "description");
  attribute.permissible_values = get_optional_list(j, "permissible_values");
  const std::string kind = get_string(j, "value_kind");
  attribute.value_kind = translate([&] { return parse_value_kind(kind); });
}

void to_json(Json& j, const TargetModel& model) {
  j = Json::object();
  j["model_name"] = model.model_name();
  j["attributes"] = model.attributes();
}

void from_json(const Json& j, TargetModel& model) {
  const std::string name = get_string(j, "model_name");
  const Json& attributes = require(j, "attributes");
  if (!attributes.is_array()) bad("attributes", "expected a list");
  std::vector<TargetAttribute> out;
  for (const Json& a : attributes) out.push_back(a.get<TargetAttribute>());
  model = TargetModel(name, std::move(out));
}

void to_json(Json& j, const MatchTarget& target) {
  std::visit([&](const auto& t) { to_json(j, t); }, target);
}

void from_json(const Json& j, MatchTarget& target) {
  if (j.is_object() && j.contains("model_name")) {
    target = j.get<TargetModel>();
  } else {
    target = j.get<Dataset>();
  }
}

void to_json(Json& j, const MatchCandidate& candidate) {
  j = Json::object();
  j["source_attribute"] = candidate.source_attribute;
  j["target_attribute"] = candidate.target_attribute;
  j["score"] = candidate.score;
  j["matcher_id"] = candidate.matcher_id;
}

void from_json(const Json& j, MatchCandidate& candidate) {
  candidate.source_attribute = get_string(j, "source_attribute");
  candidate.target_attribute = get_string(j, "target_attribute");
  candidate.score = get_number(j, "score");
  candidate.matcher_id = get_optional_string(j, "matcher_id").value_or("");
}

void to_json(Json& j, const SchemaMatchSet& set) {
  j = Json::array();
  for (const SchemaMatchEntry& e : set.entries()) {
    Json item = e.candidate;
    item["status"] = match_status_name(e.status);
    item["reason"] = optional_string(e.reason);
    j.push_back(std::move(item));
  }
}

void from_json(const Json& j, SchemaMatchSet& set) {
  if (!j.is_array()) throw Error(ErrorCode::kParseError, "schema matches must be a list");
  std::vector<SchemaMatchEntry> entries;
  for (std::size_t i = 0; i < j.size(); ++i) {
    SchemaMatchEntry e;
    e.candidate = j[i].get<MatchCandidate>();
    const auto status = get_optional_string(j[i], "status");
    e.status = status ? translate([&] { return parse_match_status(*status); }) : MatchStatus::kAutoOk;
    e.reason = get_optional_string(j[i], "reason");
    entries.push_back(std::move(e));
  }
  set = SchemaMatchSet(std::move(entries));
}

void to_json(Json& j, const AffineTransform& transform) {
  j = Json::object();
  j["a"] = transform.a;
  j["b"] = transform.b;
  j["r2"] = transform.r2;
}

void from_json(const Json& j, AffineTransform& transform) {
  transform.a = get_number(j, "a");
  transform.b = get_number(j, "b");
  transform.r2 = j.contains("r2") ? get_number(j, "r2") : 1.0;
}

void to_json(Json& j, const ValueMatch& match) {
  j = Json::object();
  j["source_value"] = match.source_value;
  j["target_value"] = match.target_value;
  j["score"] = match.score;
  j["origin"] = value_origin_name(match.origin);
}

void from_json(const Json& j, ValueMatch& match) {
  match.source_value = get_string(j, "source_value");
  match.target_value = get_string(j, "target_value");
  match.score = get_number(j, "score");
  const auto origin = get_optional_string(j, "origin");
  match.origin = origin ? translate([&] { return parse_value_origin(*origin); }) : ValueOrigin::kAuto;
}

void to_json(Json& j, const ValueMatchSet& set) {
  j = Json::object();
  j["source_attribute"] = set.source_attribute;
  j["target_attribute"] = set.target_attribute;
  j["source_values"] = set.source_values;
  j["target_domain"] = optional_list(set.target_domain);
  j["matches"] = set.matches;
  j["unmatched"] = set.unmatched();
  j["transform"] = set.transform ? Json(*set.transform) : Json(nullptr);
}

void from_json(const Json& j, ValueMatchSet& set) {
  set.source_attribute = get_string(j, "source_attribute");
  set.target_attribute = get_string(j, "target_attribute");
  const Json& matches = require(j, "matches");
  if (!matches.is_array()) bad("matches", "expected a list");
  set.matches.clear();
  for (const Json& m : matches) set.matches.push_back(m.get<ValueMatch>());
  if (j.contains("source_values")) {
    set.source_values = string_list(j["source_values"], "source_values");
  } else {
    set.source_values.clear();
    for (const ValueMatch& m : set.matches) set.source_values.push_back(m.source_value);
  }
  set.target_domain = get_optional_list(j, "target_domain");
  if (j.contains("transform") && !j["transform"].is_null()) {
    set.transform = j["transform"].get<AffineTransform>();
  } else {
    set.transform.reset();
  }
  translate([&] {
    set.validate();
    return 0;
  });
}

void to_json(Json& j, const Constraint& constraint) {
  j = Json::object();
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, NullLikeSelector>) {
          j["selector"] = Json{{"type", "null_like"}};
        } else if constexpr (std::is_same_v<S, ValueListSelector>) {
          j["selector"] = Json{{"type", "values"}, {"values", s.values}};
        } else {
          j["selector"] = Json{{"type", "regex"}, {"pattern", s.pattern}};
        }
      },
      constraint.selector);
  j["forced_target"] = constraint.forced_target;
}

void from_json(const Json& j, Constraint& constraint) {
  const Json& selector = require(j, "selector");
  const std::string type = get_string(selector, "type");
  if (type == "null_like") {
    constraint.selector = NullLikeSelector{};
  } else if (type == "values") {
    constraint.selector = ValueListSelector{string_list(require(selector, "values"), "selector.values")};
  } else if (type == "regex") {
    constraint.selector = RegexSelector{get_string(selector, "pattern")};
  } else {
    bad("selector.type", "expected null_like, values or regex");
  }
  constraint.forced_target = get_string(j, "forced_target");
}

void to_json(Json& j, const MatcherDescriptor& descriptor) {
  j = Json::object();
  j["matcher_id"] = descriptor.matcher_id;
  j["uses_values"] = descriptor.uses_values;
  Json kinds = Json::array();
  for (const ColumnKind k : descriptor.applicable_kinds) kinds.push_back(column_kind_name(k));
  j["applicable_kinds"] = std::move(kinds);
}

void to_json(Json& j, const DomainPreview& preview) {
  j = Json::object();
  j["attribute"] = preview.attribute;
  j["description"] = optional_string(preview.description);
  j["permissible_values"] = optional_list(preview.permissible_values);
  j["sample_values"] = preview.sample_values;
  j["kind"] = column_kind_name(preview.kind);
}

void from_json(const Json& j, DomainPreview& preview) {
  preview.attribute = get_string(j, "attribute");
  preview.description = get_optional_string(j, "description");
  preview.permissible_values = get_optional_list(j, "permissible_values");
  preview.sample_values = j.contains("sample_values") ? string_list(j["sample_values"], "sample_values")
                                                      : std::vector<std::string>{};
  const auto kind = get_optional_string(j, "kind");
  preview.kind = kind ? translate([&] { return parse_column_kind(*kind); }) : ColumnKind::kText;
}

void to_json(Json& j, const ProvenanceStep& step) {
  j = Json::object();
  j["primitive"] = step.primitive;
  j["input"] = step.input_summary;
  j["output"] = step.output_summary;
}

void from_json(const Json& j, ProvenanceStep& step) {
  step.primitive = get_string(j, "primitive");
  step.input_summary = get_string(j, "input");
  step.output_summary = get_string(j, "output");
}

void to_json(Json& j, const ProvenanceFlow& flow) {
  j = Json::object();
  j["steps"] = flow.steps;
  j["final_choice"] = flow.final_choice;
  j["rationale"] = flow.rationale;
}

void from_json(const Json& j, ProvenanceFlow& flow) {
  const Json& steps = require(j, "steps");
  if (!steps.is_array()) bad("steps", "expected a list");
  flow.steps.clear();
  for (const Json& s : steps) flow.steps.push_back(s.get<ProvenanceStep>());
  flow.final_choice = require(j, "final_choice").get<MatchCandidate>();
  flow.rationale = get_string(j, "rationale");
}

void to_json(Json& j, const Assessment& assessment) {
  j = Json::object();
  j["original"] = assessment.original;
  j["verdict"] = verdict_name(assessment.verdict);
  j["corrected_candidate"] =
      assessment.corrected_candidate ? Json(*assessment.corrected_candidate) : Json(nullptr);
  j["reason"] = assessment.reason;
  j["flow"] = assessment.flow;
  j["fallback"] = assessment.fallback;
}

void from_json(const Json& j, Assessment& assessment) {
  assessment.original = require(j, "original").get<MatchCandidate>();
  const std::string verdict = get_string(j, "verdict");
  assessment.verdict = translate([&] { return parse_verdict(verdict); });
  if (j.contains("corrected_candidate") && !j["corrected_candidate"].is_null()) {
    assessment.corrected_candidate = j["corrected_candidate"].get<MatchCandidate>();
  } else {
    assessment.corrected_candidate.reset();
  }
  assessment.reason = get_string(j, "reason");
  assessment.flow = require(j, "flow").get<ProvenanceFlow>();
  assessment.fallback = j.value("fallback", false);
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace harmonkit

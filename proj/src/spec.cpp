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

#include "harmonkit/spec.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "harmonkit/text.hpp"
#include "harmonkit/version.hpp"

namespace harmonkit {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::kParseError, (path.empty() ? std::string("spec") : path) + ": " + message);
}

void reject_unknown_fields(const Json& object, std::initializer_list<std::string_view> allowed,
                           const std::string& path) {
  std::vector<std::string> unknown;
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) unknown.push_back(key);
  }
  if (unknown.empty()) return;
  std::string list;
  for (std::size_t i = 0; i < unknown.size(); ++i) list += (i ? ", '" : "'") + unknown[i] + "'";
  parse_fail(path, "unknown field" + std::string(unknown.size() > 1 ? "s " : " ") + list);
}

std::string require_string(const Json& object, const char* key, const std::string& path) {
  const auto it = object.find(key);
  if (it == object.end()) parse_fail(path, std::string("missing field '") + key + "'");
  if (!it->is_string()) parse_fail(path + "." + key, "expected a string");
  return it->get<std::string>();
}

double require_number(const Json& object, const char* key, const std::string& path) {
  const auto it = object.find(key);
  if (it == object.end()) parse_fail(path, std::string("missing field '") + key + "'");
  if (!it->is_number()) parse_fail(path + "." + key, "expected a number");
  return it->get<double>();
}

ValueMapper parse_value_pairs(const Json& object, const std::string& path) {
  ValueMapper mapper;
  for (const auto& [key, value] : object.items()) {
    if (!value.is_string()) parse_fail(path + "." + key, "value map targets must be strings");
    mapper.values.emplace_back(key, value.get<std::string>());
  }
  return mapper;
}

Mapper parse_mapper(const Json& j, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "mapper must be an object");
  const auto type = j.find("type");
  if (type != j.end() && type->is_string()) {
    const std::string& kind = type->get_ref<const std::string&>();
    if (kind == "identity") {
      reject_unknown_fields(j, {"type"}, path);
      return IdentityMapper{};
    }
    if (kind == "affine") {
      reject_unknown_fields(j, {"type", "a", "b", "r2"}, path);
      AffineTransform t;
      t.a = require_number(j, "a", path);
      t.b = require_number(j, "b", path);
      t.r2 = j.contains("r2") ? require_number(j, "r2", path) : 1.0;
      return t;
    }
    if (kind == "value_map") {
      reject_unknown_fields(j, {"type", "values"}, path);
      const auto values = j.find("values");
      if (values == j.end() || !values->is_object()) parse_fail(path, "value_map needs a 'values' object");
      return parse_value_pairs(*values, path + ".values");
    }
  }
  // Bare value map, as in hand-written specs.
  return parse_value_pairs(j, path);
}

Json mapper_json(const Mapper& mapper) {
  Json j = Json::object();
  if (const auto* map = std::get_if<ValueMapper>(&mapper)) {
    Json values = Json::object();
    bool has_type_key = false;
    for (const auto& [from, to] : map->values) {
      values[from] = to;
      has_type_key = has_type_key || from == "type";
    }
    if (!has_type_key) return values;
    j["type"] = "value_map";
    j["values"] = std::move(values);
  } else if (const auto* t = std::get_if<AffineTransform>(&mapper)) {
    j["type"] = "affine";
    j["a"] = t->a;
    j["b"] = t->b;
    j["r2"] = t->r2;
  } else {
    j["type"] = "identity";
  }
  return j;
}

std::string line_and_column(std::string_view bytes, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < bytes.size(); ++i) {
    if (bytes[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

void HarmonizationSpec::validate() const {
  std::set<std::string> sources, targets;
  for (const SpecEntry& e : entries) {
    if (e.source_attribute.empty() || e.target_attribute.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "spec entries need non-empty attribute names");
    }
    if (!sources.insert(e.source_attribute).second) {
      throw Error(ErrorCode::kDuplicateAttribute, "source attribute '" + e.source_attribute + "' appears twice");
    }
    if (!targets.insert(e.target_attribute).second) {
      throw Error(ErrorCode::kDuplicateAttribute, "target attribute '" + e.target_attribute + "' appears twice");
    }
    if (const auto* map = std::get_if<ValueMapper>(&e.mapper)) {
      std::set<std::string> keys;
      for (const auto& [from, to] : map->values) {
        if (!keys.insert(normalize_text(from)).second) {
          throw Error(ErrorCode::kInvalidArgument, "mapper of '" + e.source_attribute + "' repeats key '" +
                                                       from + "' after normalization");
        }
      }
    } else if (const auto* t = std::get_if<AffineTransform>(&e.mapper)) {
      if (t->a == 0.0 || !std::isfinite(t->a) || !std::isfinite(t->b)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "affine mapper of '" + e.source_attribute + "' needs a finite non-zero slope");
      }
    }
  }
}

SpecMetadata make_metadata(std::optional<std::string> target_model) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return {buf, std::string(kVersion), std::move(target_model)};
}

HarmonizationSpec build_spec(const SchemaMatchSet& matches, std::span<const ValueMatchSet> value_sets,
                             std::optional<SpecMetadata> metadata) {
  std::map<std::string, const ValueMatchSet*> by_source;
  for (const ValueMatchSet& vs : value_sets) {
    const SchemaMatchEntry* entry = matches.find(vs.source_attribute);
    if (entry == nullptr || entry->status == MatchStatus::kRejected ||
        entry->candidate.target_attribute != vs.target_attribute) {
      throw Error(ErrorCode::kInconsistentInput, "value set " + vs.source_attribute + " -> " +
                                                     vs.target_attribute +
                                                     " has no active schema match");
    }
    if (!by_source.emplace(vs.source_attribute, &vs).second) {
      throw Error(ErrorCode::kInconsistentInput,
                  "two value sets for source attribute '" + vs.source_attribute + "'");
    }
  }

  HarmonizationSpec spec;
  spec.metadata = std::move(metadata);
  for (const SchemaMatchEntry& entry : matches.entries()) {
    if (entry.status == MatchStatus::kRejected) continue;
    SpecEntry out{entry.candidate.source_attribute, entry.candidate.target_attribute, IdentityMapper{}};
    const auto it = by_source.find(entry.candidate.source_attribute);
    if (it != by_source.end()) {
      const ValueMatchSet& vs = *it->second;
      if (vs.transform) {
        out.mapper = *vs.transform;
      } else {
        ValueMapper map;
        for (const ValueMatch& m : vs.matches) map.values.emplace_back(m.source_value, m.target_value);
        out.mapper = std::move(map);
      }
    }
    spec.entries.push_back(std::move(out));
  }
  spec.validate();
  return spec;
}

bool is_legacy_compatible(const HarmonizationSpec& spec) {
  for (const SpecEntry& e : spec.entries) {
    const auto* map = std::get_if<ValueMapper>(&e.mapper);
    if (map == nullptr) return false;
    for (const auto& kv : map->values) {
      if (kv.first == "type") return false;
    }
  }
  return true;
}

std::string serialize_spec(const HarmonizationSpec& spec, SpecFormat format) {
  Json entries = Json::array();
  for (const SpecEntry& e : spec.entries) {
    Json j = Json::object();
    j["source_attribute"] = e.source_attribute;
    j["target_attribute"] = e.target_attribute;
    j["mapper"] = mapper_json(e.mapper);
    entries.push_back(std::move(j));
  }
  Json root;
  if (format == SpecFormat::kLegacy) {
    if (!is_legacy_compatible(spec)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "legacy format needs every mapper to be a plain value map");
    }
    root = std::move(entries);
  } else {
    root = Json::object();
    root["entries"] = std::move(entries);
    if (spec.metadata) {
      Json meta = Json::object();
      meta["created_at"] = spec.metadata->created_at;
      meta["tool_version"] = spec.metadata->tool_version;
      if (spec.metadata->target_model) meta["target_model"] = *spec.metadata->target_model;
      root["metadata"] = std::move(meta);
    }
  }
  return root.dump(2) + "\n";
}

HarmonizationSpec parse_spec(std::string_view bytes) {
  Json root;
  try {
    root = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, line_and_column(bytes, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                                            e.what());
  }

  HarmonizationSpec spec;
  const Json* entries = &root;
  if (root.is_object()) {
    reject_unknown_fields(root, {"entries", "metadata"}, "");
    const auto it = root.find("entries");
    if (it == root.end()) parse_fail("", "missing field 'entries'");
    entries = &*it;
    if (const auto meta = root.find("metadata"); meta != root.end()) {
      if (!meta->is_object()) parse_fail("metadata", "expected an object");
      reject_unknown_fields(*meta, {"created_at", "tool_version", "target_model"}, "metadata");
      SpecMetadata m;
      m.created_at = require_string(*meta, "created_at", "metadata");
      m.tool_version = require_string(*meta, "tool_version", "metadata");
      if (meta->contains("target_model")) m.target_model = require_string(*meta, "target_model", "metadata");
      spec.metadata = std::move(m);
    }
  }
  if (!entries->is_array()) parse_fail("entries", "expected an array of entries");

  for (std::size_t i = 0; i < entries->size(); ++i) {
    const std::string path = "entries[" + std::to_string(i) + "]";
    const Json& e = (*entries)[i];
    if (!e.is_object()) parse_fail(path, "expected an object");
    reject_unknown_fields(e, {"source_attribute", "target_attribute", "mapper"}, path);
    SpecEntry entry;
    entry.source_attribute = require_string(e, "source_attribute", path);
    entry.target_attribute = require_string(e, "target_attribute", path);
    const auto mapper = e.find("mapper");
    if (mapper == e.end()) parse_fail(path, "missing field 'mapper'");
    entry.mapper = parse_mapper(*mapper, path + ".mapper");
    spec.entries.push_back(std::move(entry));
  }
  spec.validate();
  return spec;
}

std::string_view unmapped_policy_name(UnmappedPolicy policy) {
  switch (policy) {
    case UnmappedPolicy::kKeepOriginal: return "keep_original";
    case UnmappedPolicy::kSetNull: return "set_null";
    case UnmappedPolicy::kFail: return "fail";
  }
  return "keep_original";
}

UnmappedPolicy parse_unmapped_policy(std::string_view name) {
  if (name == "keep_original") return UnmappedPolicy::kKeepOriginal;
  if (name == "set_null") return UnmappedPolicy::kSetNull;
  if (name == "fail") return UnmappedPolicy::kFail;
  throw Error(ErrorCode::kInvalidArgument, "unknown unmapped policy '" + std::string(name) + "'");
}

Dataset materialize(const HarmonizationSpec& spec, const Dataset& data, UnmappedPolicy policy) {
  spec.validate();
  std::vector<std::string> missing;
  for (const SpecEntry& e : spec.entries) {
    if (data.find(e.source_attribute) == nullptr) missing.push_back(e.source_attribute);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) list += (i ? ", " : "") + missing[i];
    throw Error(ErrorCode::kMissingAttribute, "source data lacks spec attributes: " + list);
  }

  std::vector<Column> out;
  out.reserve(spec.entries.size());
  for (const SpecEntry& e : spec.entries) {
    const Column& column = data.column(e.source_attribute);
    std::unordered_map<std::string, const std::string*> lookup;
    const auto* map = std::get_if<ValueMapper>(&e.mapper);
    if (map != nullptr) {
      for (const auto& [from, to] : map->values) lookup.emplace(normalize_text(from), &to);
    }
    const auto* affine = std::get_if<AffineTransform>(&e.mapper);

    std::vector<Cell> cells;
    cells.reserve(column.size());
    for (std::size_t row = 0; row < column.size(); ++row) {
      const Cell& cell = column.values()[row];
      if (cell.is_null() || std::holds_alternative<IdentityMapper>(e.mapper)) {
        cells.push_back(cell);
        continue;
      }
      std::optional<Cell> mapped;
      if (map != nullptr) {
        const auto it = lookup.find(normalize_text(cell.to_string()));
        if (it != lookup.end()) mapped = Cell::text(*it->second);
      } else if (affine != nullptr && cell.is_number()) {
        const double y = (*affine)(cell.as_number());
        if (std::isfinite(y)) mapped = Cell::number(y);
      }
      if (mapped) {
        cells.push_back(std::move(*mapped));
        continue;
      }
      switch (policy) {
        case UnmappedPolicy::kKeepOriginal:
          cells.push_back(cell);
          break;
        case UnmappedPolicy::kSetNull:
          cells.push_back(Cell::null());
          break;
        case UnmappedPolicy::kFail:
          throw Error(ErrorCode::kUnmappedValue, "row " + std::to_string(row + 1) + ", " +
                                                     e.source_attribute + ": no mapping for '" +
                                                     cell.to_string() + "'");
      }
    }
    out.emplace_back(e.target_attribute, std::move(cells));
  }
  return Dataset(std::move(out));
}

}  // namespace harmonkit

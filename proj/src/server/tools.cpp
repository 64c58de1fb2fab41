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

#include "harmonkit/server/tools.hpp"

#include <algorithm>

#include "harmonkit/io.hpp"
#include "harmonkit/spec.hpp"
#include "harmonkit/value_matching.hpp"

namespace harmonkit::server {

namespace {

Json str(std::string_view description) {
  return Json{{"type", "string"}, {"description", description}};
}

Json integer(std::string_view description, int minimum) {
  return Json{{"type", "integer"}, {"description", description}, {"minimum", minimum}};
}

Json number(std::string_view description) {
  return Json{{"type", "number"}, {"description", description}};
}

Json boolean(std::string_view description) {
  return Json{{"type", "boolean"}, {"description", description}};
}

Json enumeration(std::string_view description, std::vector<std::string> values) {
  return Json{{"type", "string"}, {"description", description}, {"enum", std::move(values)}};
}

Json object(Json properties, std::vector<std::string> required) {
  return Json{{"type", "object"},
              {"properties", std::move(properties)},
              {"required", std::move(required)},
              {"additionalProperties", false}};
}

Json envelope(Json result_schema) {
  return object(Json{{"session_id", str("Session identifier")},
                     {"revision", integer("Session revision after the call", 0)},
                     {"result", std::move(result_schema)}},
                {"session_id", "revision", "result"});
}

const Json kSessionId = str("Session identifier returned by create_session");
const Json kRevision = integer("If given, the call fails unless the session is at this revision", 0);

std::vector<std::string> matcher_ids(const MatcherRegistry& registry) {
  std::vector<std::string> ids;
  for (const MatcherDescriptor& d : registry.list()) ids.push_back(d.matcher_id);
  return ids;
}

std::string get(const Json& args, const char* key, std::string fallback = {}) {
  const auto it = args.find(key);
  return it == args.end() ? fallback : it->get<std::string>();
}

std::optional<std::uint64_t> revision_of(const Json& args) {
  const auto it = args.find("revision");
  if (it == args.end()) return std::nullopt;
  return it->get<std::uint64_t>();
}

Json wrap(const Session& session, Json result) {
  Json j = Json::object();
  j["session_id"] = session.session_id;
  j["revision"] = session.revision;
  j["result"] = std::move(result);
  return j;
}

std::string resolve_target(const Session& session, const Json& args, std::string_view source_attribute) {
  const std::string explicit_target = get(args, "target_attribute");
  return explicit_target.empty() ? session.matched_target(source_attribute) : explicit_target;
}

MatchTarget load_target(const Json& args) {
  const int given = static_cast<int>(args.contains("target_model")) + static_cast<int>(args.contains("target_csv")) +
                    static_cast<int>(args.contains("target_model_json"));
  if (given != 1) {
    throw ParamError("arguments", "exactly one of target_model, target_model_json, target_csv is required");
  }
  if (args.contains("target_model")) {
    std::string name = args["target_model"].get<std::string>();
    if (name.rfind("model:", 0) == 0) name.erase(0, 6);
    return load_target_model(name);
  }
  if (args.contains("target_csv")) return parse_csv(args["target_csv"].get<std::string>());
  return parse_target_model(args["target_model_json"].dump());
}

using Handler = std::function<Json(Toolbox&, const Json&)>;

struct ToolSpec {
  ToolDescriptor descriptor;
  Handler handler;
};

std::vector<ToolSpec> make_tools(const MatcherRegistry& registry) {
  const std::vector<std::string> matchers = matcher_ids(registry);
  const std::vector<std::string> methods = {"exact", "levenshtein", "token_jaccard", "embedding", "numeric_affine",
                                            "auto"};
  const Json selector = object(
      Json{{"type", enumeration("Which source values the constraint selects", {"null_like", "values", "regex"})},
           {"values", Json{{"type", "array"}, {"items", Json{{"type", "string"}}}}},
           {"pattern", str("ECMAScript pattern, full match, case-insensitive")}},
      {"type"});
  const Json candidate = Json{{"type", "object"}};
  const Json match_list = Json{{"type", "array"}, {"items", Json{{"type", "object"}}}};

  std::vector<ToolSpec> tools;

  tools.push_back(
      {{"create_session",
        "Create a harmonization session from a source CSV and a target (bundled model name, model JSON or "
        "target CSV).",
        object(Json{{"source_csv", str("Source table as CSV text with a header row")},
                    {"target_model", str("Bundled model name or model file path, optionally prefixed 'model:'")},
                    {"target_model_json", Json{{"type", "object"}, {"description", "Inline target model"}}},
                    {"target_csv", str("Target table as CSV text with a header row")}},
               {"source_csv"}),
        envelope(object(Json{{"source_attributes", Json{{"type", "array"}}},
                             {"target_attributes", Json{{"type", "array"}}}},
                        {"source_attributes", "target_attributes"}))},
       [](Toolbox& box, const Json& args) {
         Dataset source = parse_csv(args["source_csv"].get<std::string>());
         MatchTarget target = load_target(args);
         const std::string id = box.store().create(std::move(source), std::move(target));
         const Session s = box.store().get(id);
         Json result = Json::object();
         result["source_attributes"] = s.source.column_names();
         result["target_attributes"] = target_attribute_names(s.target);
         return wrap(s, std::move(result));
       }});

  tools.push_back(
      {{"match_schema", "Compute one-to-one schema matches and store them in the session.",
        object(Json{{"session_id", kSessionId},
                    {"matcher_id", enumeration("Matcher, default ensemble", matchers)},
                    {"floor", number("Scores below this are never matched, default 0.05")},
                    {"revision", kRevision}},
               {"session_id"}),
        envelope(match_list)},
       [](Toolbox& box, const Json& args) {
         const std::string matcher = get(args, "matcher_id", std::string(matchers::kEnsemble));
         SchemaMatchOptions options;
         if (args.contains("floor")) options.floor = args["floor"].get<double>();
         const Session s = box.store().mutate(get(args, "session_id"), revision_of(args), [&](Session& s) {
           s.schema_matches = match_schema(s.source, s.target, matcher, options, box.registry());
           s.assessments.clear();
         });
         return wrap(s, s.schema_matches);
       }});

  tools.push_back(
      {{"rank_schema_matches", "Top-k target attributes for one source attribute.",
        object(Json{{"session_id", kSessionId},
                    {"source_attribute", str("Source attribute")},
                    {"k", integer("Number of candidates, default 5", 1)},
                    {"matcher_id", enumeration("Matcher, default ensemble", matchers)}},
               {"session_id", "source_attribute"}),
        envelope(Json{{"type", "array"}, {"items", candidate}})},
       [](Toolbox& box, const Json& args) {
         const Session s = box.store().get(get(args, "session_id"));
         const std::size_t k = args.contains("k") ? args["k"].get<std::size_t>() : 5;
         return wrap(s, rank_schema_matches(s.source, s.target, get(args, "source_attribute"), k,
                                            get(args, "matcher_id", std::string(matchers::kEnsemble)),
                                            box.registry()));
       }});

  tools.push_back({{"preview_domain", "Description, permissible values and sample values of a target attribute.",
                    object(Json{{"session_id", kSessionId}, {"attribute", str("Target attribute")}},
                           {"session_id", "attribute"}),
                    envelope(Json{{"type", "object"}})},
                   [](Toolbox& box, const Json& args) {
                     const Session s = box.store().get(get(args, "session_id"));
                     return wrap(s, preview_domain(s.target, get(args, "attribute")));
                   }});

  tools.push_back(
      {{"match_values",
        "Align the values of a matched attribute pair and store the result. The target defaults to the "
        "attribute's current schema match.",
        object(Json{{"session_id", kSessionId},
                    {"source_attribute", str("Source attribute")},
                    {"target_attribute", str("Target attribute")},
                    {"method", enumeration("Value matching method, default auto", methods)},
                    {"threshold", number("Minimum similarity for a match, default 0.15")},
                    {"revision", kRevision}},
               {"session_id", "source_attribute"}),
        envelope(Json{{"type", "object"}})},
       [](Toolbox& box, const Json& args) {
         const std::string source_attribute = get(args, "source_attribute");
         const ValueMethod method = parse_value_method(get(args, "method", "auto"));
         ValueMatchOptions options;
         options.embedder = &box.registry().embedder();
         if (args.contains("threshold")) options.threshold = args["threshold"].get<double>();
         ValueMatchSet out;
         const Session s = box.store().mutate(get(args, "session_id"), revision_of(args), [&](Session& s) {
           const std::string target_attribute = resolve_target(s, args, source_attribute);
           out = match_values(s.source.column(source_attribute), target_view(s.target, target_attribute), method,
                              options);
           s.value_sets[{source_attribute, target_attribute}] = out;
         });
         return wrap(s, out);
       }});

  tools.push_back(
      {{"set_value_match", "Correct one value match by hand.",
        object(Json{{"session_id", kSessionId},
                    {"source_attribute", str("Source attribute")},
                    {"target_attribute", str("Target attribute")},
                    {"source_value", str("Source value to remap")},
                    {"target_value", str("New target value")},
                    {"allow_outside_domain", boolean("Accept a target value outside the permissible values")},
                    {"revision", kRevision}},
               {"session_id", "source_attribute", "source_value", "target_value"}),
        envelope(Json{{"type", "object"}})},
       [](Toolbox& box, const Json& args) {
         const std::string source_attribute = get(args, "source_attribute");
         ValueMatchSet out;
         const Session s = box.store().mutate(get(args, "session_id"), revision_of(args), [&](Session& s) {
           const std::string target_attribute = resolve_target(s, args, source_attribute);
           out = set_value_match(current_value_set(s, source_attribute, target_attribute),
                                 get(args, "source_value"), get(args, "target_value"),
                                 args.value("allow_outside_domain", false));
           s.value_sets[{source_attribute, target_attribute}] = out;
         });
         return wrap(s, out);
       }});

  tools.push_back(
      {{"apply_constraint", "Force every selected source value of an attribute to one target value.",
        object(Json{{"session_id", kSessionId},
                    {"source_attribute", str("Source attribute")},
                    {"target_attribute", str("Target attribute")},
                    {"selector", selector},
                    {"forced_target", str("Target value for the selected source values")},
                    {"revision", kRevision}},
               {"session_id", "source_attribute", "selector", "forced_target"}),
        envelope(Json{{"type", "object"}})},
       [](Toolbox& box, const Json& args) {
         const std::string source_attribute = get(args, "source_attribute");
         const Constraint constraint =
             Json{{"selector", args["selector"]}, {"forced_target", args["forced_target"]}}.get<Constraint>();
         ValueMatchSet out;
         const Session s = box.store().mutate(get(args, "session_id"), revision_of(args), [&](Session& s) {
           const std::string target_attribute = resolve_target(s, args, source_attribute);
           out = apply_constraint(current_value_set(s, source_attribute, target_attribute), constraint);
           s.value_sets[{source_attribute, target_attribute}] = out;
         });
         return wrap(s, out);
       }});

  tools.push_back(
      {{"assess_all", "Validate or correct every automatic schema match and record provenance.",
        object(Json{{"session_id", kSessionId}, {"revision", kRevision}}, {"session_id"}),
        envelope(object(Json{{"matches", match_list}, {"assessments", Json{{"type", "object"}}}},
                        {"matches", "assessments"}))},
       [](Toolbox& box, const Json& args) {
         AssessAllResult out;
         const Session s = box.store().mutate(get(args, "session_id"), revision_of(args), [&](Session& s) {
           out = assess_all(s.schema_matches, s.source, s.target, box.reasoner(), box.registry());
           s.schema_matches = out.matches;
           for (const auto& [attr, a] : out.assessments) s.assessments[attr] = a;
         });
         Json result = Json::object();
         result["matches"] = out.matches;
         Json assessments = Json::object();
         for (const auto& [attr, a] : out.assessments) assessments[attr] = a;
         result["assessments"] = std::move(assessments);
         return wrap(s, std::move(result));
       }});

  tools.push_back(
      {{"explain_match",
        "Render the provenance flow of an attribute's assessment. Uses the stored assessment, or assesses the "
        "current match without storing it.",
        object(Json{{"session_id", kSessionId}, {"source_attribute", str("Source attribute")}},
               {"session_id", "source_attribute"}),
        envelope(object(Json{{"assessment", Json{{"type", "object"}}}, {"text", str("Rendered explanation")}},
                        {"assessment", "text"}))},
       [](Toolbox& box, const Json& args) {
         const Session s = box.store().get(get(args, "session_id"));
         const std::string source_attribute = get(args, "source_attribute");
         Assessment assessment;
         if (const auto it = s.assessments.find(source_attribute); it != s.assessments.end()) {
           assessment = it->second;
         } else {
           const SchemaMatchEntry* entry = s.schema_matches.find(source_attribute);
           if (entry == nullptr) {
             throw Error(ErrorCode::kUnknownAttribute, "no schema match for '" + source_attribute + "'");
           }
           assessment = assess_match(entry->candidate, s.source, s.target, box.reasoner(), box.registry());
         }
         Json result = Json::object();
         result["assessment"] = assessment;
         result["text"] = explain_match(assessment.original, assessment);
         return wrap(s, std::move(result));
       }});

  tools.push_back(
      {{"build_spec", "Build the harmonization specification from the session's matches.",
        object(Json{{"session_id", kSessionId}, {"format", enumeration("Output format", {"extended", "legacy"})}},
               {"session_id"}),
        envelope(object(Json{{"spec", Json{{"type", Json::array({"object", "array"})}}},
                             {"text", str("Serialized specification")}},
                        {"spec", "text"}))},
       [](Toolbox& box, const Json& args) {
         const Session s = box.store().get(get(args, "session_id"));
         const SpecFormat format = get(args, "format", "extended") == "legacy" ? SpecFormat::kLegacy
                                                                              : SpecFormat::kExtended;
         const std::string text = serialize_spec(s.spec(), format);
         Json result = Json::object();
         result["spec"] = Json::parse(text);
         result["text"] = text;
         return wrap(s, std::move(result));
       }});

  tools.push_back(
      {{"apply_spec", "Apply the session's specification to a CSV table.",
        object(Json{{"session_id", kSessionId},
                    {"csv", str("Table to harmonize, CSV text with a header row")},
                    {"unmapped_policy",
                     enumeration("What to do with values the mapper does not cover, default keep_original",
                                 {"keep_original", "set_null", "fail"})}},
               {"session_id", "csv"}),
        envelope(object(Json{{"csv", str("Harmonized table")}}, {"csv"}))},
       [](Toolbox& box, const Json& args) {
         const Session s = box.store().get(get(args, "session_id"));
         const Dataset data = parse_csv(get(args, "csv"));
         const Dataset out =
             materialize(s.spec(), data, parse_unmapped_policy(get(args, "unmapped_policy", "keep_original")));
         Json result = Json::object();
         result["csv"] = format_csv(out);
         return wrap(s, std::move(result));
       }});

  return tools;
}

const char* type_name(const Json& v) {
  if (v.is_object()) return "object";
  if (v.is_array()) return "array";
  if (v.is_string()) return "string";
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
  if (v.is_number()) return "number";
  return "null";
}

bool has_type(const Json& v, const std::string& type) {
  if (type == "number") return v.is_number();
  if (type == "integer") return v.is_number_integer() || v.is_number_unsigned();
  return type == type_name(v);
}

}  // namespace

void validate_schema(const Json& schema, const Json& value, const std::string& path) {
  if (const auto t = schema.find("type"); t != schema.end()) {
    bool ok = false;
    if (t->is_array()) {
      for (const Json& alt : *t) ok = ok || has_type(value, alt.get<std::string>());
    } else {
      ok = has_type(value, t->get<std::string>());
    }
    if (!ok) throw ParamError(path, std::string("expected ") + t->dump() + ", got " + type_name(value));
  }
  if (const auto e = schema.find("enum"); e != schema.end()) {
    if (std::find(e->begin(), e->end(), value) == e->end()) {
      throw ParamError(path, "must be one of " + e->dump());
    }
  }
  if (const auto m = schema.find("minimum"); m != schema.end() && value.is_number()) {
    if (value.get<double>() < m->get<double>()) throw ParamError(path, "must be >= " + m->dump());
  }
  if (value.is_object()) {
    const Json empty = Json::object();
    const Json& properties = schema.contains("properties") ? schema["properties"] : empty;
    if (const auto r = schema.find("required"); r != schema.end()) {
      for (const Json& key : *r) {
        if (!value.contains(key.get<std::string>())) {
          throw ParamError(path + "." + key.get<std::string>(), "is required");
        }
      }
    }
    const bool closed = schema.value("additionalProperties", true) == false;
    for (const auto& [key, item] : value.items()) {
      const auto p = properties.find(key);
      if (p == properties.end()) {
        if (closed) throw ParamError(path + "." + key, "unknown field");
        continue;
      }
      validate_schema(*p, item, path + "." + key);
    }
  }
  if (value.is_array()) {
    if (const auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        validate_schema(*items, value[i], path + "[" + std::to_string(i) + "]");
      }
    }
  }
}

Toolbox::Toolbox(SessionStore& store, const Reasoner* reasoner, const MatcherRegistry& registry)
    : store_(&store), registry_(&registry) {
  if (reasoner == nullptr) {
    default_reasoner_ = std::make_unique<DefaultReasoner>(DefaultReasonerConfig{}, registry);
    reasoner = default_reasoner_.get();
  }
  reasoner_ = reasoner;
  for (ToolSpec& t : make_tools(registry)) {
    handlers_.emplace(t.descriptor.name, std::move(t.handler));
    tools_.push_back(std::move(t.descriptor));
  }
}

const ToolDescriptor* Toolbox::find(std::string_view name) const {
  for (const ToolDescriptor& t : tools_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

Json Toolbox::call(std::string_view name, const Json& arguments) {
  const ToolDescriptor* tool = find(name);
  if (tool == nullptr) throw ParamError("name", "unknown tool '" + std::string(name) + "'");
  validate_schema(tool->input_schema, arguments, "arguments");
  return handlers_.find(name)->second(*this, arguments);
}

ValueMatchSet current_value_set(const Session& session, std::string_view source_attribute,
                                std::string_view target_attribute) {
  if (const ValueMatchSet* vs = session.value_set(source_attribute, target_attribute)) return *vs;
  return match_values(session.source.column(source_attribute), target_view(session.target, target_attribute),
                      ValueMethod::kAuto);
}

}  // namespace harmonkit::server

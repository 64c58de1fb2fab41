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

#include "harmonkit/server/http.hpp"

#include <charconv>
#include <iostream>

#include "httplib.h"

#include "harmonkit/io.hpp"
#include "harmonkit/spec.hpp"

namespace harmonkit::server {

namespace {

using httplib::Request;
using httplib::Response;

void send_json(Response& res, int status, const Json& body, std::uint64_t revision) {
  res.status = status;
  res.set_header("X-Revision", std::to_string(revision));
  res.set_content(body.dump(), "application/json");
}

void send_error(Response& res, int status, std::string_view code, const std::string& message,
                Json extra = Json::object()) {
  Json error = Json::object();
  error["code"] = code;
  error["message"] = message;
  for (auto& [k, v] : extra.items()) error[k] = v;
  res.status = status;
  res.set_content(Json{{"error", std::move(error)}}.dump(), "application/json");
}

// Runs a handler and turns exceptions into error responses.
template <typename Fn>
void guarded(Response& res, Toolbox& box, const std::string& session_id, Fn&& fn) {
  try {
    fn();
  } catch (const ParamError& e) {
    send_error(res, 422, "InvalidParams", e.what(), Json{{"path", e.path()}});
  } catch (const Error& e) {
    send_error(res, http_status(e.code()), error_code_name(e.code()), e.what());
  } catch (const Json::exception& e) {
    send_error(res, 422, error_code_name(ErrorCode::kParseError), e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "InternalError", e.what());
  }
  // Error responses also report where the session stands, when it exists.
  if (res.status >= 400 && !session_id.empty()) {
    try {
      const std::uint64_t revision = box.store().get(session_id).revision;
      res.set_header("X-Revision", std::to_string(revision));
      Json body = Json::parse(res.body);
      body["revision"] = revision;
      res.set_content(body.dump(), "application/json");
    } catch (const std::exception&) {
    }
  }
}

Json body_json(const Request& req) {
  if (req.body.empty()) return Json::object();
  Json j;
  try {
    j = Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("request body: ") + e.what());
  }
  if (!j.is_object()) throw ParamError("body", "expected a JSON object");
  return j;
}

// The revision a mutating request claims to have read.
std::uint64_t echoed_revision(const Request& req, Json& body) {
  if (body.contains("revision")) {
    if (!body["revision"].is_number_unsigned() && !body["revision"].is_number_integer()) {
      throw ParamError("body.revision", "expected an integer");
    }
    return body["revision"].get<std::uint64_t>();
  }
  if (req.has_header("If-Match")) {
    std::string tag = req.get_header_value("If-Match");
    if (tag.size() >= 2 && tag.front() == '"' && tag.back() == '"') tag = tag.substr(1, tag.size() - 2);
    std::uint64_t revision = 0;
    const auto [end, ec] = std::from_chars(tag.data(), tag.data() + tag.size(), revision);
    if (ec != std::errc() || end != tag.data() + tag.size()) throw ParamError("If-Match", "expected a revision");
    body["revision"] = revision;
    return revision;
  }
  throw ParamError("body.revision", "mutating requests must echo the session revision");
}

// Calls a tool with path parameters merged into the body and answers with
// {"revision", <key>: result}.
void tool_endpoint(const Request& req, Response& res, Toolbox& box, std::string_view tool, Json args,
                   const char* key, bool mutating) {
  if (mutating) echoed_revision(req, args);
  const Json out = box.call(tool, args);
  const std::uint64_t revision = out["revision"].get<std::uint64_t>();
  Json body = Json::object();
  body["revision"] = revision;
  body[key] = out["result"];
  send_json(res, 200, body, revision);
}

std::string file_or_field(const Request& req, const std::string& name) {
  if (req.has_file(name)) return req.get_file_value(name).content;
  return {};
}

void create_session(const Request& req, Response& res, Toolbox& box) {
  Json args = Json::object();
  std::string matcher = std::string(matchers::kEnsemble);
  if (req.is_multipart_form_data()) {
    if (!req.has_file("source")) throw ParamError("source", "a source CSV part is required");
    args["source_csv"] = file_or_field(req, "source");
    if (req.has_file("target")) {
      const std::string target = file_or_field(req, "target");
      const auto& part = req.get_file_value("target");
      const bool json_part = part.content_type.find("json") != std::string::npos ||
                             (part.filename.size() >= 5 && part.filename.substr(part.filename.size() - 5) == ".json");
      if (!part.filename.empty() || json_part) {
        if (json_part) {
          args["target_model_json"] = Json::parse(target);
        } else {
          args["target_csv"] = target;
        }
      } else {
        args["target_model"] = target;
      }
    }
    if (req.has_file("matcher")) matcher = file_or_field(req, "matcher");
  } else {
    args = body_json(req);
    if (args.contains("matcher")) {
      matcher = args["matcher"].get<std::string>();
      args.erase("matcher");
    }
  }
  const Json created = box.call("create_session", args);
  const std::string id = created["session_id"].get<std::string>();
  Json body = Json::object();
  body["session_id"] = id;
  body["revision"] = created["revision"];
  body["source_attributes"] = created["result"]["source_attributes"];
  body["target_attributes"] = created["result"]["target_attributes"];
  if (matcher != "none") {
    const Json matched = box.call("match_schema", Json{{"session_id", id}, {"matcher_id", matcher}});
    body["revision"] = matched["revision"];
    body["matches"] = matched["result"];
  }
  res.set_header("Location", "/sessions/" + id);
  send_json(res, 201, body, body["revision"].get<std::uint64_t>());
}

void set_status(const Request& req, Response& res, Toolbox& box, const std::string& id,
                const std::string& attribute) {
  Json body = body_json(req);
  const std::uint64_t revision = echoed_revision(req, body);
  validate_schema(Json{{"type", "object"},
                       {"properties",
                        Json{{"revision", Json{{"type", "integer"}}},
                             {"action", Json{{"type", "string"}, {"enum", {"accept", "reject", "edit"}}}},
                             {"target_attribute", Json{{"type", "string"}}},
                             {"reason", Json{{"type", "string"}}}}},
                       {"required", {"action"}},
                       {"additionalProperties", false}},
                  body, "body");
  const std::string action = body["action"].get<std::string>();
  std::optional<std::string> reason;
  if (body.contains("reason")) reason = body["reason"].get<std::string>();
  if (action == "edit" && !body.contains("target_attribute")) {
    throw ParamError("body.target_attribute", "is required for edit");
  }
  const Session s = box.store().mutate(id, revision, [&](Session& s) {
    if (action == "accept") {
      s.schema_matches = s.schema_matches.with_status(attribute, MatchStatus::kAccepted, reason);
    } else if (action == "reject") {
      s.schema_matches = s.schema_matches.with_status(attribute, MatchStatus::kRejected, reason);
    } else {
      const std::string target = body["target_attribute"].get<std::string>();
      s.source.column(attribute);
      const std::vector<std::string> names = target_attribute_names(s.target);
      target_view(s.target, target);
      // Score the edited pair in the full task context, as match_schema would.
      double score = 0.0;
      for (const MatchCandidate& c : rank_schema_matches(s.source, s.target, attribute, names.size(),
                                                         matchers::kEnsemble, box.registry())) {
        if (c.target_attribute == target) score = c.score;
      }
      s.schema_matches = s.schema_matches.with_candidate(MatchCandidate{attribute, target, score, "user"},
                                                         MatchStatus::kUserEdited, reason);
    }
  });
  send_json(res, 200, Json{{"revision", s.revision}, {"matches", s.schema_matches}}, s.revision);
}

void get_values(const Request& req, Response& res, Toolbox& box, const std::string& id,
                const std::string& attribute) {
  const Session s = box.store().get(id);
  const std::string target =
      req.has_param("target") ? req.get_param_value("target") : s.matched_target(attribute);
  const ValueMatchSet* stored = s.value_set(attribute, target);
  const ValueMatchSet values = current_value_set(s, attribute, target);
  Json body = Json::object();
  body["revision"] = s.revision;
  body["stored"] = stored != nullptr;
  body["values"] = values;
  send_json(res, 200, body, s.revision);
}

void get_spec(const Request& req, Response& res, Toolbox& box, const std::string& id) {
  const Session s = box.store().get(id);
  const std::string format = req.has_param("format") ? req.get_param_value("format") : "extended";
  if (format != "extended" && format != "legacy") throw ParamError("format", "expected extended or legacy");
  const std::string text =
      serialize_spec(s.spec(), format == "legacy" ? SpecFormat::kLegacy : SpecFormat::kExtended);
  res.status = 200;
  res.set_header("X-Revision", std::to_string(s.revision));
  res.set_header("Content-Disposition", "attachment; filename=\"" + id + ".harmon.json\"");
  res.set_content(text, "application/json");
}

void apply(const Request& req, Response& res, Toolbox& box, const std::string& id) {
  std::string csv;
  if (req.is_multipart_form_data()) {
    if (!req.has_file("source")) throw ParamError("source", "a CSV part is required");
    csv = file_or_field(req, "source");
  } else {
    csv = req.body;
  }
  Json args = Json{{"session_id", id}, {"csv", csv}};
  if (req.has_param("unmapped")) args["unmapped_policy"] = req.get_param_value("unmapped");
  const Json out = box.call("apply_spec", args);
  res.status = 200;
  res.set_header("X-Revision", std::to_string(out["revision"].get<std::uint64_t>()));
  res.set_content(out["result"]["csv"].get<std::string>(), "text/csv");
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownAttribute: return 404;
    case ErrorCode::kRevisionConflict: return 409;
    default: return 422;
  }
}

void mount_http_api(httplib::Server& server, Toolbox& toolbox) {
  Toolbox* box = &toolbox;
  const std::string sid = R"(/sessions/([A-Za-z0-9_-]+))";
  const std::string attr = R"(([^/]+))";

  server.Get("/health", [](const Request&, Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
  server.Get("/models", [](const Request&, Response& res) {
    res.set_content(Json{{"models", bundled_model_names()}}.dump(), "application/json");
  });
  server.Get("/matchers", [box](const Request&, Response& res) {
    res.set_content(Json{{"matchers", list_matchers(box->registry())}}.dump(), "application/json");
  });

  server.Post("/sessions", [box](const Request& req, Response& res) {
    guarded(res, *box, "", [&] { create_session(req, res, *box); });
  });
  server.Get(sid, [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] {
      const Session s = box->store().get(id);
      Json body = Json::object();
      body["session_id"] = s.session_id;
      body["revision"] = s.revision;
      body["created_at"] = s.created_at;
      body["source_attributes"] = s.source.column_names();
      body["target_attributes"] = target_attribute_names(s.target);
      body["target_model"] = target_model_name(s.target) ? Json(*target_model_name(s.target)) : Json(nullptr);
      send_json(res, 200, body, s.revision);
    });
  });
  server.Delete(sid, [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, "", [&] {
      if (!box->store().erase(id)) throw Error(ErrorCode::kUnknownSession, "unknown session '" + id + "'");
      res.set_content(R"({"deleted":true})", "application/json");
    });
  });

  server.Get(sid + "/matches", [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] {
      const Session s = box->store().get(id);
      send_json(res, 200, Json{{"revision", s.revision}, {"matches", s.schema_matches}}, s.revision);
    });
  });
  server.Post(sid + "/match", [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] {
      Json args = body_json(req);
      args["session_id"] = id;
      tool_endpoint(req, res, *box, "match_schema", std::move(args), "matches", true);
    });
  });
  server.Post(sid + "/matches/" + attr + "/status", [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] { set_status(req, res, *box, id, req.matches[2]); });
  });
  server.Post(sid + "/assess", [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] {
      Json args = body_json(req);
      args["session_id"] = id;
      tool_endpoint(req, res, *box, "assess_all", std::move(args), "result", true);
    });
  });
  server.Get(sid + "/assessments/" + attr, [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] {
      const Json out = box->call("explain_match", Json{{"session_id", id}, {"source_attribute", req.matches[2]}});
      const std::uint64_t revision = out["revision"].get<std::uint64_t>();
      Json body = Json::object();
      body["revision"] = revision;
      body["assessment"] = out["result"]["assessment"];
      body["explanation"] = out["result"]["text"];
      send_json(res, 200, body, revision);
    });
  });
  server.Get(sid + "/values/" + attr, [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] { get_values(req, res, *box, id, req.matches[2]); });
  });
  server.Post(sid + "/values/" + attr, [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] {
      Json args = body_json(req);
      args["session_id"] = id;
      args["source_attribute"] = std::string(req.matches[2]);
      tool_endpoint(req, res, *box, "set_value_match", std::move(args), "values", true);
    });
  });
  server.Post(sid + "/values/" + attr + "/match", [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] {
      Json args = body_json(req);
      args["session_id"] = id;
      args["source_attribute"] = std::string(req.matches[2]);
      tool_endpoint(req, res, *box, "match_values", std::move(args), "values", true);
    });
  });
  server.Post(sid + "/constraints/" + attr, [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] {
      Json args = body_json(req);
      args["session_id"] = id;
      args["source_attribute"] = std::string(req.matches[2]);
      tool_endpoint(req, res, *box, "apply_constraint", std::move(args), "values", true);
    });
  });
  server.Get(sid + "/spec", [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] { get_spec(req, res, *box, id); });
  });
  server.Post(sid + "/apply", [box](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    guarded(res, *box, id, [&] { apply(req, res, *box, id); });
  });
}

bool serve_http(Toolbox& toolbox, const std::string& host, int port) {
  httplib::Server server;
  mount_http_api(server, toolbox);
  if (!server.bind_to_port(host, port)) return false;
  std::cerr << "harmonkit: listening on http://" << host << ":" << port << "\n";
  return server.listen_after_bind();
}

}  // namespace harmonkit::server

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

#include "harmonkit/server/mcp.hpp"

#include <istream>
#include <ostream>

#include "harmonkit/version.hpp"

namespace harmonkit::server {

namespace {

constexpr std::string_view kProtocolVersion = "2024-11-05";

Json error_response(const Json& id, int code, const std::string& message, Json data = nullptr) {
  Json error = Json::object();
  error["code"] = code;
  error["message"] = message;
  if (!data.is_null()) error["data"] = std::move(data);
  Json j = Json::object();
  j["jsonrpc"] = "2.0";
  j["id"] = id;
  j["error"] = std::move(error);
  return j;
}

Json result_response(const Json& id, Json result) {
  Json j = Json::object();
  j["jsonrpc"] = "2.0";
  j["id"] = id;
  j["result"] = std::move(result);
  return j;
}

Json tool_result(Json structured, bool is_error) {
  Json text = Json::object();
  text["type"] = "text";
  text["text"] = structured.dump();
  Json j = Json::object();
  j["content"] = Json::array({std::move(text)});
  j["structuredContent"] = std::move(structured);
  j["isError"] = is_error;
  return j;
}

}  // namespace

std::optional<std::string> McpServer::handle(std::string_view line) {
  Json message;
  try {
    message = Json::parse(line.begin(), line.end());
  } catch (const Json::parse_error& e) {
    return error_response(nullptr, kParseErrorCode, std::string("Parse error: ") + e.what()).dump();
  }
  if (!message.is_object() || !message.contains("method") || !message["method"].is_string()) {
    const Json id = message.is_object() && message.contains("id") ? message["id"] : Json(nullptr);
    return error_response(id, kInvalidRequestCode, "Invalid Request").dump();
  }
  const bool notification = !message.contains("id");
  const Json id = notification ? Json(nullptr) : message["id"];
  const std::string method = message["method"].get<std::string>();
  const Json params = message.value("params", Json::object());

  Json response;
  if (method == "initialize") {
    Json result = Json::object();
    result["protocolVersion"] = kProtocolVersion;
    result["serverInfo"] = Json{{"name", "harmonkit"}, {"version", kVersion}};
    result["capabilities"] = Json{{"tools", Json::object()}};
    response = result_response(id, std::move(result));
  } else if (method == "notifications/initialized" || method == "initialized") {
    return std::nullopt;
  } else if (method == "tools/list") {
    Json tools = Json::array();
    for (const ToolDescriptor& t : toolbox_->tools()) {
      Json d = Json::object();
      d["name"] = t.name;
      d["description"] = t.description;
      d["inputSchema"] = t.input_schema;
      d["outputSchema"] = t.output_schema;
      tools.push_back(std::move(d));
    }
    response = result_response(id, Json{{"tools", std::move(tools)}});
  } else if (method == "tools/call") {
    if (!params.is_object() || !params.contains("name") || !params["name"].is_string()) {
      response = error_response(id, kInvalidParamsCode, "Invalid params: params.name is required",
                                Json{{"path", "params.name"}});
    } else {
      const Json arguments = params.value("arguments", Json::object());
      try {
        response = result_response(id, tool_result(toolbox_->call(params["name"].get<std::string>(), arguments),
                                                   false));
      } catch (const ParamError& e) {
        response = error_response(id, kInvalidParamsCode, std::string("Invalid params: ") + e.what(),
                                  Json{{"path", e.path()}});
      } catch (const Error& e) {
        Json error = Json::object();
        error["code"] = error_code_name(e.code());
        error["message"] = e.what();
        response = result_response(id, tool_result(Json{{"error", std::move(error)}}, true));
      } catch (const std::exception& e) {
        Json error = Json::object();
        error["code"] = error_code_name(ErrorCode::kInvalidArgument);
        error["message"] = e.what();
        response = result_response(id, tool_result(Json{{"error", std::move(error)}}, true));
      }
    }
  } else {
    response = error_response(id, kMethodNotFoundCode, "Method not found: " + method);
  }
  if (notification) return std::nullopt;
  return response.dump();
}

void McpServer::serve(std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (const auto response = handle(line)) out << *response << '\n' << std::flush;
  }
}

}  // namespace harmonkit::server

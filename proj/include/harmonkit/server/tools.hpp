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

// The tool surface shared by the MCP server and the HTTP API. Each tool is
// a thin adapter over one library operation applied to session state.

#ifndef HARMONKIT_SERVER_TOOLS_HPP_
#define HARMONKIT_SERVER_TOOLS_HPP_

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "harmonkit/assessment.hpp"
#include "harmonkit/json_codec.hpp"
#include "harmonkit/schema_matching.hpp"
#include "harmonkit/server/session.hpp"

namespace harmonkit::server {

struct ToolDescriptor {
  std::string name;
  std::string description;
  Json input_schema;
  Json output_schema;
};

/// Arguments that do not satisfy a tool's input schema. `path` points at the
/// offending field, e.g. "arguments.selector.type".
class ParamError : public std::runtime_error {
 public:
  ParamError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Checks `value` against the JSON-schema subset used by the tool
/// descriptors: type, properties, required, additionalProperties, enum,
/// items, minimum. Throws ParamError.
void validate_schema(const Json& schema, const Json& value, const std::string& path);

class Toolbox {
 public:
  /// `reasoner` defaults to the built-in DefaultReasoner. Both references
  /// must outlive the toolbox.
  explicit Toolbox(SessionStore& store, const Reasoner* reasoner = nullptr,
                   const MatcherRegistry& registry = default_registry());

  const std::vector<ToolDescriptor>& tools() const { return tools_; }
  const ToolDescriptor* find(std::string_view name) const;

  /// Validates `arguments`, then runs the tool. Returns
  /// {"session_id", "revision", "result"}. Throws ParamError for bad
  /// arguments or an unknown tool, and harmonkit::Error from the library.
  Json call(std::string_view name, const Json& arguments);

  SessionStore& store() { return *store_; }
  const Reasoner& reasoner() const { return *reasoner_; }
  const MatcherRegistry& registry() const { return *registry_; }

 private:
  SessionStore* store_;
  std::unique_ptr<DefaultReasoner> default_reasoner_;
  const Reasoner* reasoner_;
  const MatcherRegistry* registry_;
  std::vector<ToolDescriptor> tools_;
  std::map<std::string, std::function<Json(Toolbox&, const Json&)>, std::less<>> handlers_;
};

/// The value set a value-level edit applies to: the stored set for the
/// pair, or a fresh match_values(auto) when none is stored yet.
ValueMatchSet current_value_set(const Session& session, std::string_view source_attribute,
                                std::string_view target_attribute);

}  // namespace harmonkit::server

#endif  // HARMONKIT_SERVER_TOOLS_HPP_

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

// Line-delimited JSON-RPC 2.0 server implementing the MCP subset
// initialize, tools/list and tools/call.

#ifndef HARMONKIT_SERVER_MCP_HPP_
#define HARMONKIT_SERVER_MCP_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "harmonkit/server/tools.hpp"

namespace harmonkit::server {

inline constexpr int kParseErrorCode = -32700;
inline constexpr int kInvalidRequestCode = -32600;
inline constexpr int kMethodNotFoundCode = -32601;
inline constexpr int kInvalidParamsCode = -32602;

class McpServer {
 public:
  explicit McpServer(Toolbox& toolbox) : toolbox_(&toolbox) {}

  /// Handles one message. Returns the serialized response, or nullopt for
  /// notifications.
  std::optional<std::string> handle(std::string_view line);

  /// Reads messages until end of input, one response line per request.
  void serve(std::istream& in, std::ostream& out);

 private:
  Toolbox* toolbox_;
};

}  // namespace harmonkit::server

#endif  // HARMONKIT_SERVER_MCP_HPP_

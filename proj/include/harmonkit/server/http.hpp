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

// JSON-over-HTTP API for the review UI and other clients.
//
// Every JSON response carries "revision" and every response an X-Revision
// header. Mutating requests must echo the revision they read, either as a
// "revision" body field or an If-Match header; a stale revision gets 409.
//
//   POST   /sessions                              create (multipart or JSON)
//   GET    /sessions/{id}
//   DELETE /sessions/{id}
//   GET    /sessions/{id}/matches
//   POST   /sessions/{id}/match                   recompute schema matches
//   POST   /sessions/{id}/matches/{attr}/status   accept / reject / edit
//   POST   /sessions/{id}/assess                  assess_all
//   GET    /sessions/{id}/assessments/{attr}
//   GET    /sessions/{id}/values/{attr}
//   POST   /sessions/{id}/values/{attr}           set one value match
//   POST   /sessions/{id}/values/{attr}/match     recompute value matches
//   POST   /sessions/{id}/constraints/{attr}
//   GET    /sessions/{id}/spec[?format=legacy]
//   POST   /sessions/{id}/apply[?unmapped=...]    CSV in, harmonized CSV out
//   GET    /models, /matchers, /health

#ifndef HARMONKIT_SERVER_HTTP_HPP_
#define HARMONKIT_SERVER_HTTP_HPP_

#include <string>

#include "harmonkit/server/tools.hpp"

namespace httplib {
class Server;
}

namespace harmonkit::server {

/// HTTP status for a library error.
int http_status(ErrorCode code);

/// Registers all routes on `server`. `toolbox` must outlive it.
void mount_http_api(httplib::Server& server, Toolbox& toolbox);

/// Blocks serving on host:port. Returns false if the address cannot be bound.
bool serve_http(Toolbox& toolbox, const std::string& host, int port);

}  // namespace harmonkit::server

#endif  // HARMONKIT_SERVER_HTTP_HPP_

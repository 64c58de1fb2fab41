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

// Harmonization sessions shared by the tool protocol and the HTTP API.

#ifndef HARMONKIT_SERVER_SESSION_HPP_
#define HARMONKIT_SERVER_SESSION_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "harmonkit/assessment.hpp"
#include "harmonkit/core.hpp"
#include "harmonkit/json_codec.hpp"
#include "harmonkit/spec.hpp"

namespace harmonkit::server {

struct Session {
  std::string session_id;
  std::string created_at;
  Dataset source;
  MatchTarget target;
  SchemaMatchSet schema_matches;
  std::map<std::pair<std::string, std::string>, ValueMatchSet> value_sets;
  std::map<std::string, Assessment> assessments;
  std::uint64_t revision = 0;

  /// Target of the non-rejected schema match for `source_attribute`.
  /// Throws kUnknownAttribute.
  std::string matched_target(std::string_view source_attribute) const;

  /// The stored value set for the pair, if any.
  const ValueMatchSet* value_set(std::string_view source_attribute,
                                 std::string_view target_attribute) const;

  /// Value sets whose pair is an active schema match, in match order.
  std::vector<ValueMatchSet> active_value_sets() const;

  /// build_spec over the current state. Metadata carries the session's
  /// creation time so repeated downloads are byte-identical.
  HarmonizationSpec spec() const;
};

Json session_to_json(const Session& session);
Session session_from_json(const Json& j);

/// Random URL-safe identifier (22 characters, base64url alphabet).
std::string new_session_id();

/// Thread-safe session table. Every session has its own writer gate;
/// mutations run against a copy and are committed only if they succeed, so
/// a failed edit never leaves a half-applied state behind.
class SessionStore {
 public:
  /// With a directory, every committed mutation writes <dir>/<id>.json and
  /// existing snapshots are loaded on construction.
  explicit SessionStore(std::optional<std::filesystem::path> persist_dir = std::nullopt);

  /// Returns the new session's id. Revision starts at 0.
  std::string create(Dataset source, MatchTarget target);

  /// Copy of the current state. Throws kUnknownSession.
  Session get(std::string_view id) const;

  /// Applies `edit` under the session's gate. When `expected_revision` is
  /// set and differs from the current revision, throws kRevisionConflict
  /// without calling `edit`. Returns the committed state.
  Session mutate(std::string_view id, std::optional<std::uint64_t> expected_revision,
                 const std::function<void(Session&)>& edit);

  /// Returns false when the session did not exist.
  bool erase(std::string_view id);

  std::vector<std::string> ids() const;

 private:
  struct Slot {
    std::mutex gate;
    Session session;
  };

  std::shared_ptr<Slot> slot(std::string_view id) const;
  void persist(const Session& session) const;

  mutable std::shared_mutex table_mutex_;
  std::map<std::string, std::shared_ptr<Slot>, std::less<>> sessions_;
  std::optional<std::filesystem::path> persist_dir_;
};

}  // namespace harmonkit::server

#endif  // HARMONKIT_SERVER_SESSION_HPP_

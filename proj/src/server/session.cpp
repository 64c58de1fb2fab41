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

#include "harmonkit/server/session.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "harmonkit/version.hpp"

namespace harmonkit::server {

std::string Session::matched_target(std::string_view source_attribute) const {
  const SchemaMatchEntry* entry = schema_matches.find(source_attribute);
  if (entry == nullptr || entry->status == MatchStatus::kRejected) {
    throw Error(ErrorCode::kUnknownAttribute,
                "no active schema match for '" + std::string(source_attribute) + "'");
  }
  return entry->candidate.target_attribute;
}

const ValueMatchSet* Session::value_set(std::string_view source_attribute,
                                        std::string_view target_attribute) const {
  const auto it = value_sets.find({std::string(source_attribute), std::string(target_attribute)});
  return it == value_sets.end() ? nullptr : &it->second;
}

std::vector<ValueMatchSet> Session::active_value_sets() const {
  std::vector<ValueMatchSet> out;
  for (const SchemaMatchEntry& e : schema_matches.entries()) {
    if (e.status == MatchStatus::kRejected) continue;
    if (const ValueMatchSet* vs = value_set(e.candidate.source_attribute, e.candidate.target_attribute)) {
      out.push_back(*vs);
    }
  }
  return out;
}

HarmonizationSpec Session::spec() const {
  const std::vector<ValueMatchSet> sets = active_value_sets();
  return build_spec(schema_matches, sets,
                    SpecMetadata{created_at, std::string(kVersion), target_model_name(target)});
}

Json session_to_json(const Session& session) {
  Json j = Json::object();
  j["session_id"] = session.session_id;
  j["created_at"] = session.created_at;
  j["revision"] = session.revision;
  j["source"] = session.source;
  j["target"] = session.target;
  j["schema_matches"] = session.schema_matches;
  Json sets = Json::array();
  for (const auto& [key, vs] : session.value_sets) sets.push_back(vs);
  j["value_sets"] = std::move(sets);
  Json assessments = Json::object();
  for (const auto& [attr, a] : session.assessments) assessments[attr] = a;
  j["assessments"] = std::move(assessments);
  return j;
}

Session session_from_json(const Json& j) {
  Session s;
  s.session_id = j.at("session_id").get<std::string>();
  s.created_at = j.at("created_at").get<std::string>();
  s.revision = j.at("revision").get<std::uint64_t>();
  s.source = j.at("source").get<Dataset>();
  s.target = j.at("target").get<MatchTarget>();
  s.schema_matches = j.at("schema_matches").get<SchemaMatchSet>();
  for (const Json& vs : j.at("value_sets")) {
    ValueMatchSet set = vs.get<ValueMatchSet>();
    auto key = std::make_pair(set.source_attribute, set.target_attribute);
    s.value_sets.emplace(std::move(key), std::move(set));
  }
  for (const auto& [attr, a] : j.at("assessments").items()) s.assessments.emplace(attr, a.get<Assessment>());
  return s;
}

std::string new_session_id() {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::string id;
  for (int i = 0; i < 22; ++i) id.push_back(kAlphabet[rng() % 64]);
  return id;
}

SessionStore::SessionStore(std::optional<std::filesystem::path> persist_dir)
    : persist_dir_(std::move(persist_dir)) {
  if (!persist_dir_) return;
  std::error_code ec;
  std::filesystem::create_directories(*persist_dir_, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + persist_dir_->string() + "': " + ec.message());
  for (const auto& file : std::filesystem::directory_iterator(*persist_dir_)) {
    if (file.path().extension() != ".json") continue;
    std::ifstream in(file.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      auto slot = std::make_shared<Slot>();
      slot->session = session_from_json(Json::parse(buf.str()));
      sessions_.emplace(slot->session.session_id, std::move(slot));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kIoError, "bad session snapshot '" + file.path().string() + "': " + e.what());
    }
  }
}

std::string SessionStore::create(Dataset source, MatchTarget target) {
  auto slot = std::make_shared<Slot>();
  slot->session.created_at = make_metadata().created_at;
  slot->session.source = std::move(source);
  slot->session.target = std::move(target);
  std::string id;
  {
    std::unique_lock lock(table_mutex_);
    do {
      id = new_session_id();
    } while (sessions_.count(id));
    slot->session.session_id = id;
    sessions_.emplace(id, slot);
  }
  std::lock_guard gate(slot->gate);
  persist(slot->session);
  return id;
}

std::shared_ptr<SessionStore::Slot> SessionStore::slot(std::string_view id) const {
  std::shared_lock lock(table_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kUnknownSession, "unknown session '" + std::string(id) + "'");
  return it->second;
}

Session SessionStore::get(std::string_view id) const {
  const auto s = slot(id);
  std::lock_guard gate(s->gate);
  return s->session;
}

Session SessionStore::mutate(std::string_view id, std::optional<std::uint64_t> expected_revision,
                             const std::function<void(Session&)>& edit) {
  const auto s = slot(id);
  std::lock_guard gate(s->gate);
  if (expected_revision && *expected_revision != s->session.revision) {
    throw Error(ErrorCode::kRevisionConflict, "revision " + std::to_string(*expected_revision) +
                                                  " is stale; current revision is " +
                                                  std::to_string(s->session.revision));
  }
  Session draft = s->session;
  edit(draft);
  draft.session_id = s->session.session_id;
  draft.created_at = s->session.created_at;
  draft.revision = s->session.revision + 1;
  persist(draft);
  s->session = std::move(draft);
  return s->session;
}

bool SessionStore::erase(std::string_view id) {
  std::unique_lock lock(table_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return false;
  sessions_.erase(it);
  if (persist_dir_) {
    std::error_code ec;
    std::filesystem::remove(*persist_dir_ / (std::string(id) + ".json"), ec);
  }
  return true;
}

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(table_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, slot] : sessions_) out.push_back(id);
  return out;
}

void SessionStore::persist(const Session& session) const {
  if (!persist_dir_) return;
  const auto path = *persist_dir_ / (session.session_id + ".json");
  const auto tmp = *persist_dir_ / (session.session_id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << dump_canonical(session_to_json(session));
    if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "': " + ec.message());
}

}  // namespace harmonkit::server

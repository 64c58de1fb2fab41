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

#include "harmonkit/server/remote.hpp"

#include "httplib.h"

#include "harmonkit/json_codec.hpp"

namespace harmonkit::server {

namespace {

httplib::Client make_client(const std::string& base, std::chrono::seconds timeout) {
  httplib::Client client(base);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

}  // namespace

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw Error(ErrorCode::kInvalidArgument, "expected an http:// URL, got '" + url + "'");
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

HttpReasoner::HttpReasoner(std::string url, std::chrono::seconds timeout, const MatcherRegistry& registry)
    : timeout_(timeout), fallback_({}, registry) {
  std::tie(base_, path_) = split_url(url);
}

ReasonerDecision HttpReasoner::decide(const ReasonerRequest& request) const {
  Json body = Json::object();
  body["match"] = request.match;
  body["preview"] = request.preview;
  body["alternatives"] = request.alternatives;
  try {
    httplib::Client client = make_client(base_, timeout_);
    const auto res = client.Post(path_, body.dump(), "application/json");
    if (res && res->status == 200) {
      const Json reply = Json::parse(res->body);
      const long long choice = reply.at("choice").get<long long>();
      const std::string rationale = reply.value("rationale", std::string());
      if (choice == -1) return {request.match, rationale, false};
      if (choice >= 0 && static_cast<std::size_t>(choice) < request.alternatives.size()) {
        return {request.alternatives[static_cast<std::size_t>(choice)], rationale, false};
      }
    }
  } catch (const std::exception&) {
  }
  ReasonerDecision decision = fallback_.decide(request);
  decision.fallback = true;
  return decision;
}

HttpEmbedder::HttpEmbedder(std::string url, Eigen::Index dimension, std::chrono::seconds timeout)
    : dimension_(dimension), timeout_(timeout) {
  std::tie(base_, path_) = split_url(url);
}

Eigen::VectorXd HttpEmbedder::embed(std::string_view text) const {
  httplib::Client client = make_client(base_, timeout_);
  const auto res = client.Post(path_, Json::array({std::string(text)}).dump(), "application/json");
  if (!res) throw Error(ErrorCode::kIoError, "embedder request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw Error(ErrorCode::kIoError, "embedder returned HTTP " + std::to_string(res->status));
  }
  Eigen::VectorXd v(dimension_);
  try {
    const Json reply = Json::parse(res->body);
    const Json& row = reply.at(0);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dimension_) {
      throw Error(ErrorCode::kIoError, "embedder returned a vector of the wrong size");
    }
    for (Eigen::Index i = 0; i < dimension_; ++i) v[i] = row[static_cast<std::size_t>(i)].get<double>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kIoError, std::string("malformed embedder reply: ") + e.what());
  }
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

}  // namespace harmonkit::server

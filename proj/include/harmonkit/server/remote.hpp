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

// Adapters for an external reasoner and an external embedder reached over
// HTTP. Both exchange plain JSON documents.

#ifndef HARMONKIT_SERVER_REMOTE_HPP_
#define HARMONKIT_SERVER_REMOTE_HPP_

#include <chrono>
#include <string>

#include "harmonkit/assessment.hpp"
#include "harmonkit/embedding.hpp"

namespace harmonkit::server {

/// Splits "http://host:port/path" into ("http://host:port", "/path").
/// Throws kInvalidArgument.
std::pair<std::string, std::string> split_url(const std::string& url);

/// POSTs {"match", "preview", "alternatives"} and expects
/// {"choice": <index into alternatives, or -1 to keep the match>,
///  "rationale": "..."}. Any transport error, timeout or malformed reply
/// falls back to the default reasoner and flags the decision.
class HttpReasoner final : public Reasoner {
 public:
  explicit HttpReasoner(std::string url, std::chrono::seconds timeout = std::chrono::seconds(30),
                        const MatcherRegistry& registry = default_registry());

  ReasonerDecision decide(const ReasonerRequest& request) const override;
  std::string name() const override { return "http"; }

 private:
  std::string base_;
  std::string path_;
  std::chrono::seconds timeout_;
  DefaultReasoner fallback_;
};

/// POSTs a JSON list with one string and expects a list with one vector of
/// `dimension` numbers. The result is L2-normalized. Throws kIoError.
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(std::string url, Eigen::Index dimension,
               std::chrono::seconds timeout = std::chrono::seconds(30));

  Eigen::VectorXd embed(std::string_view text) const override;
  Eigen::Index dimension() const override { return dimension_; }
  std::string id() const override { return "http:" + base_ + path_; }

 private:
  std::string base_;
  std::string path_;
  Eigen::Index dimension_;
  std::chrono::seconds timeout_;
};

}  // namespace harmonkit::server

#endif  // HARMONKIT_SERVER_REMOTE_HPP_

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

#include "harmonkit/embedding.hpp"

#include <cstdint>

#include "harmonkit/similarity.hpp"
#include "harmonkit/text.hpp"

namespace harmonkit {
namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Eigen::VectorXd TrigramEmbedder::embed(std::string_view text) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kDimension);
  const std::string normalized = normalize_text(text);
  if (normalized.empty()) return v;
  const std::string padded = " " + normalized + " ";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::uint64_t h = fnv1a(std::string_view(padded).substr(i, 3));
    const auto bucket = static_cast<Eigen::Index>(h % kDimension);
    v[bucket] += ((h >> 32) & 1U) ? 1.0 : -1.0;
  }
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

const Embedder& default_embedder() {
  static const TrigramEmbedder embedder;
  return embedder;
}

double embedding_similarity(const Embedder& embedder, std::string_view a, std::string_view b) {
  if (normalize_text(a) == normalize_text(b)) return 1.0;
  const Eigen::VectorXd ea = embedder.embed(a);
  const Eigen::VectorXd eb = embedder.embed(b);
  if (ea.isZero(0.0) || eb.isZero(0.0)) return 0.0;
  return (cosine(ea, eb) + 1.0) / 2.0;
}

}  // namespace harmonkit

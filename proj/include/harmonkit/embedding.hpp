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

#ifndef HARMONKIT_EMBEDDING_HPP_
#define HARMONKIT_EMBEDDING_HPP_

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace harmonkit {

/// Text -> fixed-dimension vector. Implementations must be deterministic and
/// return L2-normalized vectors (or the zero vector).
class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual Eigen::VectorXd embed(std::string_view text) const = 0;
  virtual Eigen::Index dimension() const = 0;
  virtual std::string id() const = 0;
};

/// Signed character-trigram hashing over " " + normalize_text(text) + " ".
/// Each trigram lands in one of 256 buckets with a +/-1 sign taken from an
/// independent bit of the same 64-bit FNV-1a hash.
class TrigramEmbedder final : public Embedder {
 public:
  static constexpr Eigen::Index kDimension = 256;

  Eigen::VectorXd embed(std::string_view text) const override;
  Eigen::Index dimension() const override { return kDimension; }
  std::string id() const override { return "trigram-hash-256"; }
};

const Embedder& default_embedder();

/// Cosine rescaled from [-1, 1] to [0, 1]. Identical normalized strings
/// score 1; otherwise a zero embedding on either side scores 0.
double embedding_similarity(const Embedder& embedder, std::string_view a,
                            std::string_view b);

}  // namespace harmonkit

#endif  // HARMONKIT_EMBEDDING_HPP_

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

// String and vector similarity primitives shared by schema and value
// matching. All similarities are in [0, 1].

#ifndef HARMONKIT_SIMILARITY_HPP_
#define HARMONKIT_SIMILARITY_HPP_

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace harmonkit {

/// Unit-cost edit distance over bytes (Wagner-Fischer, two rows).
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - distance / max(|a|, |b|) over normalize_text forms; 1 when both are
/// empty after normalization.
double levenshtein_similarity(std::string_view a, std::string_view b);

template <typename T>
double jaccard(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

/// Jaccard over tokenize() sets.
double token_jaccard(std::string_view a, std::string_view b);

/// Cosine of two vectors; 0 when either has zero norm.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (na == Scalar(0) || nb == Scalar(0)) return Scalar(0);
  const Scalar c = a.dot(b) / (na * nb);
  return std::clamp(c, Scalar(-1), Scalar(1));
}

}  // namespace harmonkit

#endif  // HARMONKIT_SIMILARITY_HPP_

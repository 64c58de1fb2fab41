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

// Maximum-weight one-to-one assignment on dense score matrices
// (Kuhn-Munkres with potentials, O(n^3)). Rectangular inputs are padded
// with zero scores to a square matrix.

#ifndef HARMONKIT_ASSIGNMENT_HPP_
#define HARMONKIT_ASSIGNMENT_HPP_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace harmonkit {

/// For each row, the column it is assigned to, or -1 when the row was
/// assigned to padding. Maximizes the sum of scores(row, col).
template <typename Derived>
std::vector<Eigen::Index> max_weight_assignment(const Eigen::MatrixBase<Derived>& scores) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index rows = scores.rows();
  const Eigen::Index cols = scores.cols();
  std::vector<Eigen::Index> result(static_cast<std::size_t>(rows), -1);
  if (rows == 0 || cols == 0) return result;

  const Eigen::Index n = std::max(rows, cols);
  const Scalar top = std::max(scores.maxCoeff(), Scalar(0));
  // Minimization on cost = top - score; padding cells score 0.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cost =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, top);
  cost.topLeftCorner(rows, cols).array() -= scores.array();

  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> u(n + 1, Scalar(0)), v(n + 1, Scalar(0));
  std::vector<Eigen::Index> p(n + 1, 0), way(n + 1, 0);
  for (Eigen::Index i = 1; i <= n; ++i) {
    p[0] = i;
    Eigen::Index j0 = 0;
    std::vector<Scalar> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const Eigen::Index i0 = p[j0];
      Scalar delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Scalar cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (Eigen::Index j = 1; j <= n; ++j) {
    const Eigen::Index row = p[j] - 1;
    const Eigen::Index col = j - 1;
    if (row < rows && col < cols) result[static_cast<std::size_t>(row)] = col;
  }
  return result;
}

/// Optimal one-to-one pairs after masking scores below `floor` to zero.
/// Only pairs with a positive masked score are returned, ordered by row.
template <typename Derived>
std::vector<std::pair<Eigen::Index, Eigen::Index>> assign_pairs(
    const Eigen::MatrixBase<Derived>& scores, typename Derived::Scalar floor) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> masked =
      (scores.array() >= floor).select(scores.array(), Scalar(0)).matrix();
  const auto rows = max_weight_assignment(masked);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Eigen::Index c = rows[r];
    if (c >= 0 && masked(static_cast<Eigen::Index>(r), c) > Scalar(0)) {
      pairs.emplace_back(static_cast<Eigen::Index>(r), c);
    }
  }
  return pairs;
}

}  // namespace harmonkit

#endif  // HARMONKIT_ASSIGNMENT_HPP_

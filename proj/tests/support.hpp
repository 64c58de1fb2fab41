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

// Shared helpers for the test binaries.

#ifndef HARMONKIT_TESTS_SUPPORT_HPP_
#define HARMONKIT_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "harmonkit/core.hpp"
#include "harmonkit/io.hpp"

namespace harmonkit::testing {

inline std::filesystem::path data_dir() { return HARMONKIT_DATA_DIR; }
inline std::filesystem::path golden_dir() { return HARMONKIT_GOLDEN_DIR; }

inline Dataset endometrial() { return read_csv(data_dir() / "fixtures" / "endometrial.csv"); }
inline Dataset pancreatic() { return read_csv(data_dir() / "fixtures" / "pancreatic.csv"); }
inline TargetModel gdc() { return load_target_model("gdc-subset"); }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Column text_column(std::string name, const std::vector<std::string>& values) {
  std::vector<Cell> cells;
  for (const auto& v : values) cells.push_back(Cell::text(v));
  return Column(std::move(name), std::move(cells));
}

inline Column number_column(std::string name, const std::vector<double>& values) {
  std::vector<Cell> cells;
  for (double v : values) cells.push_back(Cell::number(v));
  return Column(std::move(name), std::move(cells));
}

/// Random string over a small alphabet that exercises case, separators and
/// digits, so normalization and tokenization paths all get hit.
inline std::string random_string(std::mt19937_64& rng, std::size_t max_len = 12) {
  static const std::string alphabet = "abcAB C_-12xyZ";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
  return s;
}

/// Best total over all one-to-one partial assignments, counting only
/// entries >= floor. Exhaustive over permutations of the larger side.
inline double brute_force_best(const Eigen::MatrixXd& scores, double floor) {
  const Eigen::Index rows = scores.rows(), cols = scores.cols();
  const bool transpose = rows > cols;
  const Eigen::MatrixXd m = transpose ? Eigen::MatrixXd(scores.transpose()) : scores;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(m.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double total = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double s = m(r, perm[static_cast<std::size_t>(r)]);
      if (s >= floor) total += s;
    }
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace harmonkit::testing

#endif  // HARMONKIT_TESTS_SUPPORT_HPP_

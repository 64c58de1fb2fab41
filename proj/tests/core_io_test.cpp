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

#include <gtest/gtest.h>

#include <cstdint>
#include <cstdlib>
#include <map>
#include <random>

#include "harmonkit/assignment.hpp"
#include "harmonkit/embedding.hpp"
#include "harmonkit/io.hpp"
#include "harmonkit/json_codec.hpp"
#include "harmonkit/text.hpp"
#include "support.hpp"

namespace harmonkit {
namespace {

using testing::brute_force_best;
using testing::number_column;
using testing::text_column;

// ---------------------------------------------------------------------------
// Embedding

// Counts trigrams first, then hashes each distinct trigram once.
Eigen::VectorXd trigram_oracle(const std::string& normalized) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(256);
  if (normalized.empty()) return v;
  const std::string padded = " " + normalized + " ";
  std::map<std::string, int> counts;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) ++counts[padded.substr(i, 3)];
  for (const auto& [gram, n] : counts) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : gram) h = (h ^ c) * 0x100000001b3ULL;
    v[static_cast<Eigen::Index>(h % 256)] += n * (((h >> 32) & 1U) ? 1.0 : -1.0);
  }
  return v.norm() > 0 ? Eigen::VectorXd(v / v.norm()) : v;
}

TEST(Embedding, MatchesTrigramCountingOracle) {
  const TrigramEmbedder embedder;
  for (const std::string s : {"Histologic_grade", "FIGO grade 2", "a", "pT1a (FIGO IA)", "Sex"}) {
    EXPECT_TRUE(embedder.embed(s).isApprox(trigram_oracle(normalize_text(s)), 1e-12)) << s;
  }
}

TEST(Embedding, ConventionsAndDeterminism) {
  const Embedder& e = default_embedder();
  EXPECT_EQ(e.dimension(), 256);
  EXPECT_EQ(e.embed("Gender"), e.embed("Gender"));
  EXPECT_NEAR(e.embed("Gender").norm(), 1.0, 1e-12);
  EXPECT_TRUE(e.embed("").isZero(0.0));
  EXPECT_EQ(embedding_similarity(e, "Gender", "gender"), 1.0);
  EXPECT_EQ(embedding_similarity(e, "", "Gender"), 0.0);
  EXPECT_EQ(embedding_similarity(e, "", "__"), 1.0);
}

// ---------------------------------------------------------------------------
// Assignment

double assigned_total(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
  double total = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= 0) total += m(static_cast<Eigen::Index>(r), rows[r]);
  }
  return total;
}

TEST(Assignment, MatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    Eigen::MatrixXd m(dim(rng), dim(rng));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = unit(rng);
    }
    const auto rows = max_weight_assignment(m);
    std::set<Eigen::Index> cols;
    for (Eigen::Index c : rows) {
      if (c >= 0) {
        EXPECT_TRUE(cols.insert(c).second);
      }
    }
    EXPECT_NEAR(assigned_total(m, rows), brute_force_best(m, 0.0), 1e-12);
  }
}

TEST(Assignment, GreedyTrap) {
  // Greedy takes (0,0)=0.9 and is left with 0.1; optimal is 0.8 + 0.8.
  Eigen::MatrixXd m(2, 2);
  m << 0.9, 0.8, 0.8, 0.1;
  EXPECT_EQ(max_weight_assignment(m), (std::vector<Eigen::Index>{1, 0}));
}

TEST(Assignment, FloorMasksBeforeSolving) {
  Eigen::MatrixXd m(2, 2);
  m << 0.5, 0.04, 0.3, 0.0;
  const auto pairs = assign_pairs(m, 0.05);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0], (std::pair<Eigen::Index, Eigen::Index>{0, 0}));
  EXPECT_TRUE(assign_pairs(Eigen::MatrixXd(0, 3), 0.05).empty());
}

// ---------------------------------------------------------------------------
// Core types

TEST(Core, NumberFormattingRoundTrips) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = d(rng);
    EXPECT_EQ(*parse_number(format_number(v)), v);
  }
  EXPECT_EQ(format_number(4.0), "4");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_FALSE(parse_number("nan"));
  EXPECT_FALSE(parse_number(" 1"));
  EXPECT_FALSE(parse_number("1x"));
  EXPECT_THROW(Cell::number(std::nan("")), Error);
}

TEST(Core, ColumnKindAndDistinctValues) {
  const Column c("c", {Cell::text("b"), Cell::null(), Cell::text("a"), Cell::text("b")});
  EXPECT_EQ(c.kind(), ColumnKind::kText);
  EXPECT_EQ(c.distinct_values(), (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(Column("n", {Cell::number(1), Cell::null()}).kind(), ColumnKind::kNumeric);
  EXPECT_EQ(Column("m", {Cell::number(1), Cell::text("x")}).kind(), ColumnKind::kMixed);
  EXPECT_EQ(Column("e", {Cell::null()}).kind(), ColumnKind::kText);
}

TEST(Core, DatasetInvariants) {
  EXPECT_THROW(Dataset({text_column("a", {"x"}), text_column("a", {"y"})}), Error);
  EXPECT_THROW(Dataset({text_column("a", {"x"}), text_column("b", {"y", "z"})}), Error);
  const Dataset d({text_column("a", {"x", "y"})});
  EXPECT_THROW(d.column("zz"), Error);
  const std::vector<std::size_t> rows = {1};
  EXPECT_EQ(d.select_rows(rows).column("a").values()[0], Cell::text("y"));
}

TEST(Core, SchemaMatchSetOneToOne) {
  const MatchCandidate a{"s1", "t", 0.5, "m"}, b{"s2", "t", 0.4, "m"};
  auto entry = [](const MatchCandidate& c, MatchStatus s = MatchStatus::kAutoOk) {
    return SchemaMatchEntry{c, s, std::nullopt};
  };
  EXPECT_THROW(SchemaMatchSet({entry(a), entry(b)}), Error);
  EXPECT_THROW(SchemaMatchSet({entry(a), entry(a)}), Error);
  // A rejected entry does not hold its target.
  const SchemaMatchSet ok({entry(a, MatchStatus::kRejected), entry(b)});
  EXPECT_EQ(ok.size(), 2u);
  EXPECT_THROW(ok.with_status("s1", MatchStatus::kAccepted), Error);
  EXPECT_THROW(ok.with_status("nope", MatchStatus::kAccepted), Error);
  const SchemaMatchSet edited = ok.with_candidate({"s1", "u", 1.0, "user"}, MatchStatus::kUserEdited, "fix");
  EXPECT_EQ(edited.find("s1")->candidate.target_attribute, "u");
  EXPECT_EQ(edited.find("s1")->reason, "fix");
}

TEST(Core, TargetModelValidation) {
  EXPECT_THROW(TargetModel("m", {{"a", {}, {}, ValueKind::kFreeText}, {"a", {}, {}, ValueKind::kFreeText}}), Error);
  try {
    TargetModel("m", {{"a", {}, {}, ValueKind::kCategorical}, {"b", {}, {}, ValueKind::kCategorical}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidationError);
    EXPECT_NE(std::string(e.what()).find("a: categorical"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("b: categorical"), std::string::npos);
  }
}

TEST(Core, ConstraintSelectors) {
  EXPECT_TRUE((Constraint{NullLikeSelector{}, "Unknown"}.selects("na")));
  EXPECT_FALSE((Constraint{NullLikeSelector{}, "Unknown"}.selects("Infection")));
  EXPECT_TRUE((Constraint{ValueListSelector{{"Foo Bar"}}, "x"}.selects("foo_bar")));
  EXPECT_TRUE((Constraint{RegexSelector{"g[0-9]"}, "x"}.selects("G2")));
  EXPECT_FALSE((Constraint{RegexSelector{"g"}, "x"}.selects("G2")));
}

// ---------------------------------------------------------------------------
// CSV

TEST(Csv, FixtureColumns) {
  const Dataset d = testing::endometrial();
  for (const char* name : {"Gender", "Histologic_Grade_FIGO", "FIGO_stage"}) EXPECT_NE(d.find(name), nullptr);
  EXPECT_EQ(d.num_rows(), 60u);
  EXPECT_EQ(d.column("Age").kind(), ColumnKind::kNumeric);
}

TEST(Csv, HeaderOnly) {
  const Dataset d = parse_csv("a,b\n");
  EXPECT_EQ(d.column_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(d.num_rows(), 0u);
}

TEST(Csv, StrictNumericRule) {
  EXPECT_EQ(parse_csv("c\n1\n2\nx\n").column("c").kind(), ColumnKind::kText);
  EXPECT_EQ(parse_csv("c\n1\n2\n\n").column("c").kind(), ColumnKind::kNumeric);
  EXPECT_EQ(parse_csv("c\n1\n\"2\"\n").column("c").kind(), ColumnKind::kNumeric);
}

TEST(Csv, QuotingNewlinesAndNulls) {
  const Dataset d = parse_csv("a,b\r\n\"x, y\",\"he said \"\"hi\"\"\"\r\n\"multi\nline\",\r\n");
  EXPECT_EQ(d.column("a").values()[0], Cell::text("x, y"));
  EXPECT_EQ(d.column("b").values()[0], Cell::text("he said \"hi\""));
  EXPECT_EQ(d.column("a").values()[1], Cell::text("multi\nline"));
  EXPECT_TRUE(d.column("b").values()[1].is_null());
  EXPECT_EQ(parse_csv("a\n\"\"\n").column("a").values()[0], Cell::text(""));
}

TEST(Csv, Errors) {
  auto code_of = [](std::string_view text) {
    try {
      parse_csv(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of("a,b\n1\n"), ErrorCode::kRaggedRow);
  EXPECT_EQ(code_of("a,a\n1,2\n"), ErrorCode::kDuplicateHeader);
  EXPECT_EQ(code_of("a\n\xff\n"), ErrorCode::kEncodingError);
  EXPECT_EQ(code_of("a\n\"open\n"), ErrorCode::kParseError);
  EXPECT_THROW(read_csv("/nonexistent/file.csv"), Error);
}

TEST(Csv, BomAndCustomNulls) {
  CsvOptions options;
  options.null_tokens = {"", "NA"};
  const Dataset d = parse_csv("\xEF\xBB\xBFx\nNA\n\"NA\"\n", options);
  EXPECT_EQ(d.column_names(), std::vector<std::string>{"x"});
  EXPECT_TRUE(d.column("x").values()[0].is_null());
  EXPECT_EQ(d.column("x").values()[1], Cell::text("NA"));
}

TEST(Csv, WriteRules) {
  const Dataset d({text_column("a", {"x,y", ""}), Column("b", {Cell::null(), Cell::number(2.5)})});
  EXPECT_EQ(format_csv(d), "a,b\n\"x,y\",\n\"\",2.5\n");
  EXPECT_EQ(parse_csv(format_csv(d)), d);
}

TEST(Csv, FixtureRoundTrip) {
  const Dataset d = testing::endometrial();
  const auto path = std::filesystem::temp_directory_path() / "harmonkit_roundtrip.csv";
  write_csv(d, path);
  EXPECT_EQ(read_csv(path), d);
  std::filesystem::remove(path);
}

// ---------------------------------------------------------------------------
// Target models

TEST(Models, BundledGdcSubset) {
  const TargetModel m = testing::gdc();
  EXPECT_EQ(m.model_name(), "gdc-subset");
  const TargetAttribute* grade = m.find("Histologic_grade");
  ASSERT_NE(grade, nullptr);
  for (const char* v : {"G1 Well differentiated", "G2 Moderately differentiated", "G3 Poorly differentiated"}) {
    EXPECT_NE(std::find(grade->permissible_values->begin(), grade->permissible_values->end(), v),
              grade->permissible_values->end());
  }
  const auto& pt = *m.find("Pathologic_staging_primary_tumor_pt")->permissible_values;
  EXPECT_NE(std::find(pt.begin(), pt.end(), "pT1a (FIGO IA)"), pt.end());
  EXPECT_NE(std::find(bundled_model_names().begin(), bundled_model_names().end(), "gdc-subset"),
            bundled_model_names().end());
}

TEST(Models, ValidationCollectsProblems) {
  try {
    parse_target_model(R"({"model_name":"m","attributes":[
      {"name":"a","value_kind":"categorical"},
      {"name":"a","value_kind":"free_text"}]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidationError);
  }
  EXPECT_THROW(parse_target_model("{"), Error);
  EXPECT_THROW(load_target_model("no-such-model"), Error);
}

TEST(Models, JsonRoundTrip) {
  const TargetModel m = testing::gdc();
  EXPECT_EQ(parse_target_model(Json(m).dump()), m);
}

// ---------------------------------------------------------------------------
// Splitting

Dataset numbered(std::size_t n) {
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(static_cast<double>(i));
  return Dataset({number_column("id", v)});
}

TEST(Split, SizesAndDeterminism) {
  const auto [base, holdout] = split_dataset(numbered(10), 0.3, 42);
  EXPECT_EQ(base.num_rows(), 7u);
  EXPECT_EQ(holdout.num_rows(), 3u);
  EXPECT_EQ(split_dataset(numbered(10), 0.3, 42).second, holdout);
  EXPECT_EQ(split_dataset(numbered(2), 0.01, 1).second.num_rows(), 1u);
  EXPECT_EQ(split_dataset(numbered(2), 0.99, 1).second.num_rows(), 1u);
  EXPECT_THROW(split_dataset(numbered(1), 0.5, 1), Error);
  EXPECT_THROW(split_dataset(numbered(5), 1.0, 1), Error);
  EXPECT_THROW(split_dataset(numbered(5), 0.0, 1), Error);
}

TEST(Split, PartsPreserveOrderAndUnionIsOriginal) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng() % 60;
    std::vector<double> v;
    for (std::size_t r = 0; r < n; ++r) v.push_back(static_cast<double>(rng() % 7));
    const Dataset d({number_column("v", v)});
    const auto [base, holdout] = split_dataset(d, 0.1 + 0.8 * static_cast<double>(rng() % 100) / 100.0, rng());
    std::multiset<double> all(v.begin(), v.end()), parts;
    for (double x : base.column("v").numbers()) parts.insert(x);
    for (double x : holdout.column("v").numbers()) parts.insert(x);
    EXPECT_EQ(parts, all);
  }
  const auto rows = holdout_rows(50, 0.4, 7);
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
  EXPECT_EQ(rows.size(), 20u);
}

}  // namespace
}  // namespace harmonkit

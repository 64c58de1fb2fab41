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

#include <random>

#include "harmonkit/schema_matching.hpp"
#include "harmonkit/similarity.hpp"
#include "harmonkit/text.hpp"
#include "harmonkit/value_matching.hpp"
#include "scenario.hpp"
#include "support.hpp"

namespace harmonkit {
namespace {

using testing::number_column;
using testing::text_column;

// ---------------------------------------------------------------------------
// Schema matching

TEST(ScorePair, NameMatchers) {
  const Column gender = text_column("gender", {"F"});
  const TargetAttribute sex{"sex", {}, {}, ValueKind::kFreeText};
  EXPECT_NEAR(score_pair(matchers::kNameLevenshtein, gender, sex).score, 1.0 - 5.0 / 6.0, 1e-15);
  const Column grade = text_column("Histologic_Grade_FIGO", {"x"});
  const TargetAttribute target{"Histologic_grade", {}, {}, ValueKind::kFreeText};
  EXPECT_NEAR(score_pair(matchers::kNameTokenJaccard, grade, target).score, 2.0 / 3.0, 1e-15);
}

TEST(ScorePair, SelfSimilarityForEveryMatcher) {
  const Column c = text_column("Vital_status", {"Alive", "Dead", "Alive"});
  for (const MatcherDescriptor& d : list_matchers()) {
    EXPECT_NEAR(score_pair(d.matcher_id, c, c).score, 1.0, 1e-12) << d.matcher_id;
  }
}

TEST(ScorePair, KindCheckAndUnknownMatcher) {
  const Column numbers = number_column("age", {40, 50});
  const PairScore s = score_pair(matchers::kTfidfValues, numbers, text_column("age", {"x"}));
  EXPECT_FALSE(s.applicable);
  EXPECT_EQ(s.score, 0.0);
  try {
    score_pair("nope", numbers, numbers);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownMatcher);
  }
}

TEST(Rank, GenderRanksSexFirstOnValues) {
  const auto ranked = rank_schema_matches(testing::endometrial(), MatchTarget(testing::gdc()), "Gender", 3,
                                          matchers::kValueOverlap);
  ASSERT_EQ(ranked.size(), 3u);
  EXPECT_EQ(ranked[0].target_attribute, "Sex");
}

TEST(Rank, LargeKGivesFullRanking) {
  const TargetModel m = testing::gdc();
  const auto ranked =
      rank_schema_matches(testing::endometrial(), MatchTarget(m), "FIGO_stage", 1000, matchers::kEnsemble);
  EXPECT_EQ(ranked.size(), m.attributes().size());
  EXPECT_THROW(rank_schema_matches(testing::endometrial(), MatchTarget(m), "nope", 3, matchers::kEnsemble), Error);
}

TEST(Rank, EqualsSortedScoreMatrix) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    std::vector<Column> src, dst;
    for (int k = 0; k < 6; ++k) {
      src.push_back(text_column("s" + testing::random_string(rng, 6) + std::to_string(k), {"a", "b"}));
      dst.push_back(text_column("t" + testing::random_string(rng, 6) + std::to_string(k), {"b", "c"}));
    }
    const Dataset source(src), target_data(dst);
    const MatchTarget target = target_data;
    const Eigen::MatrixXd m = score_matrix(source, target, matchers::kNameLevenshtein);
    for (int r = 0; r < 6; ++r) {
      std::vector<std::pair<double, std::string>> oracle;
      for (int c = 0; c < 6; ++c) oracle.emplace_back(-m(r, c), normalize_text(dst[static_cast<std::size_t>(c)].name()));
      std::sort(oracle.begin(), oracle.end());
      const auto ranked = rank_schema_matches(source, target, src[static_cast<std::size_t>(r)].name(), 6,
                                              matchers::kNameLevenshtein);
      ASSERT_EQ(ranked.size(), 6u);
      for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_EQ(normalize_text(ranked[k].target_attribute), oracle[k].second);
        EXPECT_EQ(ranked[k].score, -oracle[k].first);
      }
    }
  }
}

TEST(MatchSchema, ScenarioPairs) {
  const SchemaMatchSet s = match_schema(testing::endometrial(), MatchTarget(testing::gdc()), matchers::kEnsemble);
  EXPECT_EQ(s.find("Gender")->candidate.target_attribute, "Sex");
  EXPECT_EQ(s.find("Histologic_Grade_FIGO")->candidate.target_attribute, "Histologic_grade");
  for (const SchemaMatchEntry& e : s.entries()) {
    EXPECT_EQ(e.status, MatchStatus::kAutoOk);
    EXPECT_GE(e.candidate.score, 0.05);
  }
}

TEST(MatchSchema, IdentityColumn) {
  const Column c = text_column("Vital_status", {"Alive", "Dead"});
  const SchemaMatchSet s = match_schema(Dataset({c}), MatchTarget(Dataset({c})), matchers::kEnsemble);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.entries()[0].candidate.target_attribute, "Vital_status");
  EXPECT_NEAR(s.entries()[0].candidate.score, 1.0, 1e-12);
}

TEST(MatchSchema, FiveByFiveMatchesBruteForce) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd table(5, 5);
  MatcherRegistry registry = MatcherRegistry::builtin();
  registry.add({"lookup", false, {ColumnKind::kText}}, [&table](const Column& s, const TargetView& t, const MatchContext&) {
    return PairScore{table(s.name()[1] - '0', t.name[1] - '0'), true};
  });
  std::vector<Column> src;
  std::vector<TargetAttribute> attrs;
  for (int k = 0; k < 5; ++k) {
    src.push_back(text_column("s" + std::to_string(k), {"x"}));
    attrs.push_back({"t" + std::to_string(k), {}, {}, ValueKind::kFreeText});
  }
  const MatchTarget target = TargetModel("t", attrs);
  for (int i = 0; i < 100; ++i) {
    for (Eigen::Index r = 0; r < 5; ++r) {
      for (Eigen::Index c = 0; c < 5; ++c) table(r, c) = unit(rng);
    }
    double total = 0.0;
    const SchemaMatchSet found = match_schema(Dataset(src), target, "lookup", {}, registry);
    for (const SchemaMatchEntry& e : found.entries()) {
      total += e.candidate.score;
    }
    EXPECT_NEAR(total, testing::brute_force_best(table, 0.05), 1e-12);
  }
}

TEST(MatchSchema, EnsembleIsMeanOfApplicableMatchers) {
  const Dataset src = testing::endometrial();
  const MatchTarget target = testing::gdc();
  const TargetView sex = target_view(target, "Sex");
  const MatchContext ctx = default_registry().context(src.columns(), target_views(target));
  double sum = 0.0;
  int n = 0;
  for (const MatcherDescriptor& d : list_matchers()) {
    if (d.matcher_id == matchers::kEnsemble) continue;
    const PairScore s = default_registry().score(d.matcher_id, src.column("Gender"), sex, ctx);
    if (s.applicable) {
      sum += s.score;
      ++n;
    }
  }
  EXPECT_NEAR(default_registry().score(matchers::kEnsemble, src.column("Gender"), sex, ctx).score, sum / n, 1e-12);
}

TEST(PreviewDomain, Cases) {
  const DomainPreview p = preview_domain(MatchTarget(testing::gdc()), "Histologic_grade");
  ASSERT_TRUE(p.permissible_values);
  EXPECT_EQ((*p.permissible_values)[0], "G1 Well differentiated");
  EXPECT_LE(p.sample_values.size(), DomainPreview::kMaxSamples);
  const Dataset table({Column("empty", {Cell::null(), Cell::null()})});
  EXPECT_TRUE(preview_domain(MatchTarget(table), "empty").sample_values.empty());
  try {
    preview_domain(MatchTarget(table), "nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownAttribute);
  }
}

TEST(Registry, ListingAndPlugins) {
  EXPECT_EQ(list_matchers().size(), 6u);
  MatcherRegistry registry = MatcherRegistry::builtin();
  registry.add({"always_half", false, {ColumnKind::kText}},
               [](const Column&, const TargetView&, const MatchContext&) { return PairScore{0.5, true}; });
  const auto list = list_matchers(registry);
  EXPECT_EQ(list.size(), 7u);
  std::set<std::string> ids;
  for (const auto& d : list) ids.insert(d.matcher_id);
  EXPECT_EQ(ids.size(), list.size());
  EXPECT_THROW(registry.add({"always_half", false, {}}, nullptr), Error);
  EXPECT_EQ(score_pair("always_half", text_column("a", {"x"}), text_column("b", {"y"}), registry).score, 0.5);
}

// ---------------------------------------------------------------------------
// Value matching

TEST(SimilarityValue, Examples) {
  EXPECT_EQ(similarity_value(ValueMethod::kExact, "NA", "na"), 1.0);
  EXPECT_EQ(similarity_value(ValueMethod::kExact, "NA", "nan"), 0.0);
  EXPECT_NEAR(similarity_value(ValueMethod::kLevenshtein, "IA", "pT1a[IA]"), 0.25, 1e-15);
  EXPECT_NEAR(similarity_value(ValueMethod::kTokenJaccard, "FIGO grade 2", "G2 Moderately differentiated"),
              1.0 / 6.0, 1e-15);
  EXPECT_THROW(similarity_value(ValueMethod::kAuto, "a", "b"), Error);
}

TEST(MatchValues, GradeDiagonal) {
  const Column src = text_column("g", {"FIGO grade 1", "FIGO grade 2", "FIGO grade 3"});
  const TargetAttribute dst{"Histologic_grade",
                            {},
                            std::vector<std::string>{"G1 Well differentiated", "G2 Moderately differentiated",
                                                     "G3 Poorly differentiated"},
                            ValueKind::kCategorical};
  const ValueMatchSet s = match_values(src, dst, ValueMethod::kTokenJaccard);
  ASSERT_EQ(s.matches.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(s.matches[static_cast<std::size_t>(i)].source_value, "FIGO grade " + std::to_string(i + 1));
    EXPECT_EQ(s.matches[static_cast<std::size_t>(i)].target_value, (*dst.permissible_values)[static_cast<std::size_t>(i)]);
    EXPECT_NEAR(s.matches[static_cast<std::size_t>(i)].score, 1.0 / 6.0, 1e-15);
  }
}

TEST(MatchValues, ExactIdentity) {
  const Column c = text_column("v", {"a", "b", "c", "a"});
  const ValueMatchSet s = match_values(c, c, ValueMethod::kExact);
  ASSERT_EQ(s.matches.size(), 3u);
  for (const ValueMatch& m : s.matches) {
    EXPECT_EQ(m.source_value, m.target_value);
    EXPECT_EQ(m.score, 1.0);
  }
}

TEST(MatchValues, NullLikeStayUnmatchedAndErrors) {
  const Column src = text_column("v", {"Alive", "na", "Dead"});
  const ValueMatchSet s = match_values(src, text_column("t", {"alive", "dead"}), ValueMethod::kExact);
  EXPECT_EQ(s.unmatched(), std::vector<std::string>{"na"});
  try {
    match_values(src, TargetAttribute{"x", {}, {}, ValueKind::kFreeText}, ValueMethod::kTokenJaccard);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDomain);
  }
  try {
    match_values(src, number_column("n", {1, 2}), ValueMethod::kNumericAffine);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompatibleKinds);
  }
}

TEST(MatchValues, NumericAffine) {
  const ValueMatchSet s =
      match_values(number_column("c", {0, 100, 50}), number_column("f", {32, 212, 122}), ValueMethod::kAuto);
  ASSERT_TRUE(s.transform);
  EXPECT_NEAR(s.transform->a, 1.8, 1e-12);
  EXPECT_NEAR(std::stod(s.find("100")->target_value), 212.0, 1e-9);
}

TEST(FitAffine, Examples) {
  const std::vector<double> x = {0, 1, 2, 3}, y = {3, 5, 7, 9};
  const AffineTransform t = fit_affine(x, y);
  EXPECT_NEAR(t.a, 2.0, 1e-12);
  EXPECT_NEAR(t.b, 3.0, 1e-12);
  EXPECT_EQ(t.r2, 1.0);
  const std::vector<double> c = {0, 100}, f = {32, 212};
  const AffineTransform cf = fit_affine(c, f);
  EXPECT_NEAR(cf.a, 1.8, 1e-12);
  EXPECT_NEAR(cf.b, 32.0, 1e-12);
  const std::vector<double> flat = {1, 1, 1};
  EXPECT_THROW(fit_affine(flat, y), Error);
}

TEST(FitAffine, NoisyDataMatchesNormalEquations) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::uniform_real_distribution<double> xs(0.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x(30), y;
    for (double& v : x) v = xs(rng);
    std::sort(x.begin(), x.end());
    for (double v : x) y.push_back(2.5 * v - 1.0 + noise(rng));
    // Quantile pairing sorts both sides; the oracle fits the same pairing.
    std::vector<double> ys = y;
    std::sort(ys.begin(), ys.end());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      sx += x[k];
      sy += ys[k];
      sxx += x[k] * x[k];
      sxy += x[k] * ys[k];
    }
    const double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double b = (sy - a * sx) / n;
    const AffineTransform t = fit_affine(x, y);
    EXPECT_NEAR(t.a, a, 1e-9);
    EXPECT_NEAR(t.b, b, 1e-9);
    EXPECT_LT(t.r2, 1.0);
  }
}

TEST(FitAffine, UnequalLengthsOnAGrid) {
  std::vector<double> x, y;
  for (int i = 0; i <= 10; ++i) x.push_back(i);
  for (int i = 0; i <= 40; ++i) y.push_back(4.0 * (i / 4.0) + 7.0);
  const AffineTransform t = fit_affine(x, y);
  EXPECT_NEAR(t.a, 4.0, 1e-9);
  EXPECT_NEAR(t.b, 7.0, 1e-9);
}

TEST(SetValueMatch, CorrectionIdempotenceAndErrors) {
  const testing::CurationRun run = testing::run_curation(testing::endometrial(), testing::gdc());
  EXPECT_EQ(run.stage_values_auto.find("IA")->target_value, "pT1a[IA]");
  const ValueMatch* ia = run.stage_values.find("IA");
  EXPECT_EQ(ia->target_value, "pT1a (FIGO IA)");
  EXPECT_EQ(ia->origin, ValueOrigin::kUser);
  EXPECT_EQ(ia->score, 1.0);
  EXPECT_EQ(set_value_match(run.stage_values, "IA", "pT1a (FIGO IA)"), run.stage_values);
  try {
    set_value_match(run.stage_values, "IV", "pT4 (FIGO IVA)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSourceValue);
  }
  try {
    set_value_match(run.stage_values, "IA", "Stage 1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainViolation);
  }
  EXPECT_EQ(set_value_match(run.stage_values, "IA", "Stage 1", true).find("IA")->target_value, "Stage 1");
}

TEST(ApplyConstraint, NullLikeToUnknown) {
  const ValueMatchSet before = testing::cause_of_death_initial(testing::pancreatic(), testing::gdc());
  const Constraint c{NullLikeSelector{}, "Unknown"};
  const ValueMatchSet after = apply_constraint(before, c);
  EXPECT_EQ(before.find("na")->target_value, "Not Reported");
  EXPECT_EQ(after.find("na")->target_value, "Unknown");
  EXPECT_EQ(after.find("na")->origin, ValueOrigin::kConstraint);
  for (const ValueMatch& m : before.matches) {
    if (m.source_value != "na") {
      EXPECT_EQ(*after.find(m.source_value), m);
    }
  }
  EXPECT_EQ(apply_constraint(after, c), after);
  EXPECT_EQ(apply_constraint(before, Constraint{ValueListSelector{{"nothing"}}, "Unknown"}), before);
  EXPECT_THROW(apply_constraint(before, Constraint{NullLikeSelector{}, "Bogus"}), Error);
}

}  // namespace
}  // namespace harmonkit

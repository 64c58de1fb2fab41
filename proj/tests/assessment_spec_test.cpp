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

#include "harmonkit/assessment.hpp"
#include "harmonkit/embedding.hpp"
#include "harmonkit/json_codec.hpp"
#include "harmonkit/similarity.hpp"
#include "harmonkit/spec.hpp"
#include "harmonkit/text.hpp"
#include "scenario.hpp"
#include "support.hpp"

namespace harmonkit {
namespace {

using testing::text_column;

// ---------------------------------------------------------------------------
// Assessment

const SchemaMatchEntry& entry_for(const SchemaMatchSet& set, const std::string& source) {
  const SchemaMatchEntry* e = set.find(source);
  if (e == nullptr) throw std::runtime_error("no entry for " + source);
  return *e;
}

TEST(Assessment, PancreaticStagingIsCorrected) {
  const Dataset source = testing::pancreatic();
  const MatchTarget target = testing::gdc();
  const SchemaMatchSet matches = match_schema(source, target, matchers::kEnsemble);
  const MatchCandidate initial = entry_for(matches, "pathologic_staging_n").candidate;
  EXPECT_EQ(initial.target_attribute, "Pathologic_staging_primary_tumor_pt");

  const Assessment a = assess_match(initial, source, target, DefaultReasoner());
  EXPECT_EQ(a.verdict, Verdict::kCorrected);
  ASSERT_EQ(a.flow.steps.size(), 4u);
  const std::vector<std::string> primitives = {"match_schema", "preview_domain", "rank_schema_matches",
                                               "assess_match"};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(a.flow.steps[i].primitive, primitives[i]);
  EXPECT_EQ(a.flow.final_choice.target_attribute, "Pathologic_staging_regional_lymph_nodes_pn");
  EXPECT_EQ(a.corrected_candidate->target_attribute, "Pathologic_staging_regional_lymph_nodes_pn");
  EXPECT_EQ(a.original, initial);
}

TEST(Assessment, AssessAllKeepsCleanMatches) {
  const Dataset source = testing::pancreatic();
  const MatchTarget target = testing::gdc();
  const AssessAllResult r =
      assess_all(match_schema(source, target, matchers::kEnsemble), source, target, DefaultReasoner());
  for (const char* clean : {"sex", "tumor_focality", "cause_of_death"}) {
    EXPECT_EQ(entry_for(r.matches, clean).status, MatchStatus::kAutoOk) << clean;
    EXPECT_EQ(r.assessments.at(clean).verdict, Verdict::kOk) << clean;
  }
  const SchemaMatchEntry& pn = entry_for(r.matches, "pathologic_staging_n");
  EXPECT_EQ(pn.status, MatchStatus::kAiCorrected);
  EXPECT_TRUE(pn.reason && !pn.reason->empty());
  EXPECT_TRUE(assess_all(SchemaMatchSet(), source, target, DefaultReasoner()).matches.empty());
}

TEST(Assessment, ForcedAcceptKeepsOriginal) {
  const Dataset source({text_column("vital", {"Alive", "Dead", "Alive"})});
  const MatchTarget target = testing::gdc();
  const MatchCandidate match{"vital", "Vital_status", 0.95, "ensemble"};
  const Assessment a = assess_match(match, source, target, DefaultReasoner());
  EXPECT_EQ(a.verdict, Verdict::kOk);
  EXPECT_EQ(a.flow.final_choice, match);
  EXPECT_NE(a.reason.find("original retained"), std::string::npos);
}

TEST(Assessment, UserDecisionsAreLeftAlone) {
  const Dataset source = testing::pancreatic();
  const MatchTarget target = testing::gdc();
  const SchemaMatchSet matches = match_schema(source, target, matchers::kEnsemble)
                                     .with_status("pathologic_staging_n", MatchStatus::kAccepted);
  const AssessAllResult r = assess_all(matches, source, target, DefaultReasoner());
  EXPECT_EQ(entry_for(r.matches, "pathologic_staging_n"), entry_for(matches, "pathologic_staging_n"));
  EXPECT_EQ(r.assessments.count("pathologic_staging_n"), 0u);
}

// Independent recomputation of the default reasoner's combined score.
double oracle_combined(const Column& source, const TargetView& target) {
  const double name = (levenshtein_similarity(source.name(), target.name) +
                       token_jaccard(source.name(), target.name) +
                       embedding_similarity(default_embedder(), source.name(), target.name)) /
                      3.0;
  double domain = 0.5;
  if (target.kind == ColumnKind::kNumeric) {
    domain = source.kind() == ColumnKind::kNumeric ? 1.0 : 0.0;
  } else if (target.domain && !target.domain->empty()) {
    std::vector<std::string> values;
    for (const std::string& v : source.distinct_values()) {
      if (!is_null_like(v)) values.push_back(v);
    }
    if (!values.empty()) {
      double total = 0.0;
      for (const std::string& v : values) {
        double best = 0.0;
        for (const std::string& d : *target.domain) best = std::max(best, token_jaccard(v, d));
        total += best;
      }
      domain = total / static_cast<double>(values.size());
    }
  }
  return 0.5 * name + 0.5 * domain;
}

TEST(Assessment, DecisionIsArgmaxOfCombinedScore) {
  std::mt19937_64 rng(31);
  const TargetModel model = testing::gdc();
  const MatchTarget target = model;
  const DefaultReasoner reasoner;
  int corrected = 0;
  for (int i = 0; i < 30; ++i) {
    const Dataset source = testing::random_assessment_fixture(rng, model);
    const SchemaMatchSet matches = match_schema(source, target, matchers::kEnsemble);
    for (const SchemaMatchEntry& e : matches.entries()) {
      const Column& column = source.column(e.candidate.source_attribute);
      const Assessment a = assess_match(e.candidate, source, target, reasoner);
      if (a.reason.rfind("original retained: score", 0) == 0) continue;  // forced accept
      const double original = oracle_combined(column, target_view(target, e.candidate.target_attribute));
      double best = -1.0;
      std::string best_target;
      for (const MatchCandidate& alt :
           rank_schema_matches(source, target, e.candidate.source_attribute, 5, matchers::kEnsemble)) {
        if (alt.target_attribute == e.candidate.target_attribute) continue;
        const double c = oracle_combined(column, target_view(target, alt.target_attribute));
        if (c > best) {
          best = c;
          best_target = alt.target_attribute;
        }
      }
      const std::string expected = best >= original + 0.10 ? best_target : e.candidate.target_attribute;
      EXPECT_EQ(a.flow.final_choice.target_attribute, expected);
      corrected += a.verdict == Verdict::kCorrected;
    }
  }
  EXPECT_GT(corrected, 0);
}

class RogueReasoner final : public Reasoner {
 public:
  ReasonerDecision decide(const ReasonerRequest& request) const override {
    MatchCandidate c = request.match;
    c.target_attribute = "Body_mass_index_not_offered";
    return {c, "made up", false};
  }
  std::string name() const override { return "rogue"; }
};

TEST(Assessment, ReasonerMustChooseOfferedCandidate) {
  const Dataset source = testing::pancreatic();
  try {
    assess_match({"sex", "Sex", 0.5, "ensemble"}, source, MatchTarget(testing::gdc()), RogueReasoner());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kReasonerContract);
  }
  EXPECT_THROW(assess_match({"nope", "Sex", 0.5, "x"}, source, MatchTarget(testing::gdc()), DefaultReasoner()),
               Error);
}

TEST(Explain, StepsInOrderAndDeterministic) {
  const Dataset source = testing::pancreatic();
  const MatchTarget target = testing::gdc();
  const MatchCandidate initial = entry_for(match_schema(source, target, matchers::kEnsemble),
                                           "pathologic_staging_n").candidate;
  const Assessment a = assess_match(initial, source, target, DefaultReasoner());
  const std::string text = explain_match(initial, a);
  std::size_t last = 0;
  for (const char* step : {"match_schema", "preview_domain", "rank_schema_matches", "assess_match"}) {
    const std::size_t at = text.find(step, last);
    ASSERT_NE(at, std::string::npos) << step;
    last = at;
  }
  EXPECT_EQ(text, explain_match(initial, assess_match(initial, source, target, DefaultReasoner())));

  const MatchCandidate sex = entry_for(match_schema(source, target, matchers::kEnsemble), "sex").candidate;
  const Assessment ok = assess_match(sex, source, target, DefaultReasoner());
  const std::string kept = explain_match(sex, ok);
  EXPECT_NE(kept.find("original retained"), std::string::npos);
  EXPECT_NE(kept.find("name"), std::string::npos);
  EXPECT_NE(kept.find("domain"), std::string::npos);
}

TEST(Assessment, JsonRoundTrip) {
  const Dataset source = testing::pancreatic();
  const MatchTarget target = testing::gdc();
  const AssessAllResult r =
      assess_all(match_schema(source, target, matchers::kEnsemble), source, target, DefaultReasoner());
  for (const auto& [attr, a] : r.assessments) EXPECT_EQ(Json(a).get<Assessment>(), a) << attr;
  EXPECT_EQ(Json(r.matches).get<SchemaMatchSet>(), r.matches);
}

// ---------------------------------------------------------------------------
// Specifications

const char* kSnippet = R"json([
   {"source_attribute": "Histologic_Grade_FIGO",
    "target_attribute": "Histologic_grade",
    "mapper": {
      "FIGO grade 1": "G1 Well differentiated",
      "FIGO grade 2": "G2 Moderately differentiated",
      "FIGO grade 3": "G3 Poorly differentiated"}},
   {"source_attribute": "FIGO_stage",
    "target_attribute": "Pathologic_staging_primary_tumor_pt",
    "mapper": {
      "IA": "pT1a (FIGO IA)",
      "IIIA": "pT3a (FIGO IIIA)",
      "II": "pT2 (FIGO II)"}}
])json";

TEST(Spec, ParsesTheReferenceSnippet) {
  const HarmonizationSpec spec = parse_spec(kSnippet);
  ASSERT_EQ(spec.entries.size(), 2u);
  EXPECT_FALSE(spec.metadata);
  const auto& map = std::get<ValueMapper>(spec.entries[1].mapper).values;
  ASSERT_EQ(map.size(), 3u);
  EXPECT_EQ(map[0], (std::pair<std::string, std::string>{"IA", "pT1a (FIGO IA)"}));
  EXPECT_EQ(serialize_spec(spec, SpecFormat::kLegacy), testing::slurp(testing::golden_dir() / "endometrial_legacy.harmon.json"));
}

TEST(Spec, CurationMatchesGolden) {
  const testing::CurationRun run = testing::run_curation(testing::endometrial(), testing::gdc());
  ASSERT_EQ(run.spec.entries.size(), 2u);
  EXPECT_EQ(serialize_spec(run.spec, SpecFormat::kLegacy),
            testing::slurp(testing::golden_dir() / "endometrial_legacy.harmon.json"));
  const Json j = Json::parse(serialize_spec(run.spec));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j["entries"][0].items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"source_attribute", "target_attribute", "mapper"}));
}

TEST(Spec, EmptyAndErrors) {
  EXPECT_TRUE(parse_spec("[]").entries.empty());
  auto code_of = [](std::string_view text) {
    try {
      parse_spec(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of(R"([{"source_attribute":"a","target_attribute":"x","mapper":{}},
                        {"source_attribute":"a","target_attribute":"y","mapper":{}}])"),
            ErrorCode::kDuplicateAttribute);
  EXPECT_EQ(code_of("[{"), ErrorCode::kParseError);
  EXPECT_EQ(code_of(R"([{"source_attribute":"a","target_attribute":"x","mapper":{},"extra":1}])"),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of(R"([{"source_attribute":"a","target_attribute":"x","mapper":{"type":"affine","a":0,"b":1}}])"),
            ErrorCode::kInvalidArgument);
}

TEST(Spec, BuildRules) {
  const SchemaMatchSet matches({SchemaMatchEntry{{"a", "A", 0.9, "m"}, MatchStatus::kAutoOk, std::nullopt},
                                SchemaMatchEntry{{"b", "B", 0.8, "m"}, MatchStatus::kRejected, std::nullopt}});
  const HarmonizationSpec identity = build_spec(matches, {});
  ASSERT_EQ(identity.entries.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<IdentityMapper>(identity.entries[0].mapper));
  ValueMatchSet on_rejected;
  on_rejected.source_attribute = "b";
  on_rejected.target_attribute = "B";
  const std::vector<ValueMatchSet> sets = {on_rejected};
  try {
    build_spec(matches, sets);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentInput);
  }
  ValueMatchSet affine;
  affine.source_attribute = "a";
  affine.target_attribute = "A";
  affine.transform = AffineTransform{1.8, 32.0, 1.0};
  const std::vector<ValueMatchSet> numeric = {affine};
  const HarmonizationSpec spec = build_spec(matches, numeric);
  const std::string text = serialize_spec(spec);
  EXPECT_NE(text.find("\"type\": \"affine\""), std::string::npos);
  EXPECT_FALSE(is_legacy_compatible(spec));
  EXPECT_THROW(serialize_spec(spec, SpecFormat::kLegacy), Error);
}

TEST(Spec, RandomRoundTrips) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 300; ++i) {
    const HarmonizationSpec spec = testing::random_spec(rng);
    const std::string text = serialize_spec(spec);
    EXPECT_EQ(parse_spec(text), spec);
    EXPECT_EQ(serialize_spec(parse_spec(text)), text);
  }
}

TEST(Materialize, LookupPoliciesAndNulls) {
  const HarmonizationSpec spec = parse_spec(kSnippet);
  const Dataset data({text_column("Histologic_Grade_FIGO", {"FIGO grade 1", "figo_grade_2", "grade 9"}),
                      Column("FIGO_stage", {Cell::text("IA"), Cell::null(), Cell::text("IIIA")}),
                      text_column("extra", {"x", "y", "z"})});
  const Dataset out = materialize(spec, data);
  EXPECT_EQ(out.column_names(), (std::vector<std::string>{"Histologic_grade", "Pathologic_staging_primary_tumor_pt"}));
  EXPECT_EQ(out.column("Histologic_grade").values()[0], Cell::text("G1 Well differentiated"));
  EXPECT_EQ(out.column("Histologic_grade").values()[1], Cell::text("G2 Moderately differentiated"));
  EXPECT_EQ(out.column("Histologic_grade").values()[2], Cell::text("grade 9"));
  EXPECT_TRUE(out.column("Pathologic_staging_primary_tumor_pt").values()[1].is_null());

  EXPECT_TRUE(materialize(spec, data, UnmappedPolicy::kSetNull).column("Histologic_grade").values()[2].is_null());
  try {
    materialize(spec, data, UnmappedPolicy::kFail);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnmappedValue);
  }
  try {
    materialize(spec, Dataset({text_column("other", {"x"})}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingAttribute);
    EXPECT_NE(std::string(e.what()).find("FIGO_stage"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("Histologic_Grade_FIGO"), std::string::npos);
  }
}

TEST(Materialize, IdentityAndAffine) {
  HarmonizationSpec spec;
  spec.entries.push_back({"temp_c", "temp_f", AffineTransform{1.8, 32.0, 1.0}});
  spec.entries.push_back({"name", "label", IdentityMapper{}});
  const Dataset data({testing::number_column("temp_c", {0, 100}), text_column("name", {"a", "b"})});
  const Dataset out = materialize(spec, data);
  EXPECT_EQ(out.column("temp_f").values()[1], Cell::number(212));
  EXPECT_EQ(out.column("label").values(), data.column("name").values());
}

TEST(Materialize, HoldoutMatchesRowOracle) {
  const auto [base, holdout] = split_dataset(testing::endometrial(), 0.3, 42);
  const testing::CurationRun run = testing::run_curation(base, testing::gdc());
  const Dataset out = materialize(run.spec, holdout);
  const std::map<std::string, std::string> grade = {{"FIGO grade 1", "G1 Well differentiated"},
                                                    {"FIGO grade 2", "G2 Moderately differentiated"},
                                                    {"FIGO grade 3", "G3 Poorly differentiated"}};
  const std::map<std::string, std::string> stage = {
      {"IA", "pT1a (FIGO IA)"}, {"IIIA", "pT3a (FIGO IIIA)"}, {"II", "pT2 (FIGO II)"}};
  for (std::size_t r = 0; r < holdout.num_rows(); ++r) {
    EXPECT_EQ(out.column("Histologic_grade").values()[r].as_text(),
              grade.at(holdout.column("Histologic_Grade_FIGO").values()[r].as_text()));
    EXPECT_EQ(out.column(testing::kStageTarget).values()[r].as_text(),
              stage.at(holdout.column("FIGO_stage").values()[r].as_text()));
  }
}

}  // namespace
}  // namespace harmonkit

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

// Reusable workflows over the bundled fixtures, shared by the unit tests and
// the acceptance runner.

#ifndef HARMONKIT_TESTS_SCENARIO_HPP_
#define HARMONKIT_TESTS_SCENARIO_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "harmonkit/assessment.hpp"
#include "harmonkit/core.hpp"
#include "harmonkit/spec.hpp"
#include "harmonkit/value_matching.hpp"

namespace harmonkit::testing {

inline constexpr const char* kStageTarget = "Pathologic_staging_primary_tumor_pt";

/// The endometrial curation run: keep the grade match found by the ensemble,
/// pin FIGO_stage to the pT attribute as a user edit, align both value
/// domains with token Jaccard, correct IA by hand, reject everything else.
struct CurationRun {
  SchemaMatchSet automatic;   // match_schema output
  SchemaMatchSet curated;     // after the researcher's edits
  ValueMatchSet grade_values;
  ValueMatchSet stage_values_auto;
  ValueMatchSet stage_values;  // after the IA correction
  HarmonizationSpec spec;
};

CurationRun run_curation(const Dataset& source, const TargetModel& model);

/// Pancreatic cause_of_death as first proposed: automatic matching, with the
/// null-like "na" sent to "Not Reported".
ValueMatchSet cause_of_death_initial(const Dataset& pancreatic, const TargetModel& model);

/// Synthetic source table derived from the bundled model: a random subset of
/// attributes under perturbed names and values, plus unrelated noise columns.
Dataset random_assessment_fixture(std::mt19937_64& rng, const TargetModel& model);

/// Random specification mixing value maps (with awkward keys), affine and
/// identity mappers, with or without metadata.
HarmonizationSpec random_spec(std::mt19937_64& rng);

}  // namespace harmonkit::testing

#endif  // HARMONKIT_TESTS_SCENARIO_HPP_

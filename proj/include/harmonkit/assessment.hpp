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

// Match assessment: validates or corrects schema matches through a fixed
// pipeline (initial match -> domain preview -> alternative ranking ->
// reasoner) and records every step as a provenance flow.

#ifndef HARMONKIT_ASSESSMENT_HPP_
#define HARMONKIT_ASSESSMENT_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harmonkit/core.hpp"
#include "harmonkit/schema_matching.hpp"

namespace harmonkit {

enum class Verdict { kOk, kCorrected, kQuestionable };

std::string_view verdict_name(Verdict verdict);
Verdict parse_verdict(std::string_view name);

struct ProvenanceStep {
  std::string primitive;
  std::string input_summary;
  std::string output_summary;

  bool operator==(const ProvenanceStep&) const = default;
};

struct ProvenanceFlow {
  std::vector<ProvenanceStep> steps;
  MatchCandidate final_choice;
  std::string rationale;

  bool operator==(const ProvenanceFlow&) const = default;
};

struct Assessment {
  MatchCandidate original;  // the match that was assessed
  Verdict verdict = Verdict::kOk;
  std::optional<MatchCandidate> corrected_candidate;
  std::string reason;
  ProvenanceFlow flow;
  // Set when an external reasoner failed and the default one decided.
  bool fallback = false;

  bool operator==(const Assessment&) const = default;
};

/// Everything a reasoner may look at. `source_column` and `target` are for
/// in-process reasoners; remote adapters send only match, preview and
/// alternatives.
struct ReasonerRequest {
  MatchCandidate match;
  DomainPreview preview;
  std::vector<MatchCandidate> alternatives;
  const Column* source_column = nullptr;
  const MatchTarget* target = nullptr;
};

struct ReasonerDecision {
  MatchCandidate chosen;
  std::string rationale;
  bool fallback = false;
};

class Reasoner {
 public:
  virtual ~Reasoner() = default;
  /// Must return the original match or one of request.alternatives.
  virtual ReasonerDecision decide(const ReasonerRequest& request) const = 0;
  virtual std::string name() const = 0;
};

struct DefaultReasonerConfig {
  double margin = 0.10;
  // Used when the candidate has no enumerable domain.
  double open_domain_compatibility = 0.5;
  double forced_accept_score = 0.9;
};

/// Deterministic rule-based reasoner.
///
/// combined(c) = 0.5 * name_score(c) + 0.5 * domain_compatibility(c), where
/// name_score is the mean of the three name matchers and
/// domain_compatibility is the mean, over non-null-like distinct source
/// values, of the best token-Jaccard similarity into the candidate's domain.
/// Numeric candidates score 1 for numeric sources and 0 otherwise; other
/// candidates without an enumerable domain score open_domain_compatibility.
/// The original is kept unless an alternative beats it by at least the
/// margin, or unconditionally when its score is >= forced_accept_score and
/// every source value lies in the target's permissible values.
class DefaultReasoner final : public Reasoner {
 public:
  explicit DefaultReasoner(DefaultReasonerConfig config = {},
                           const MatcherRegistry& registry = default_registry());

  ReasonerDecision decide(const ReasonerRequest& request) const override;
  std::string name() const override { return "default"; }

  double name_score(const Column& source, const TargetView& target) const;
  double domain_compatibility(const Column& source, const TargetView& target) const;
  double combined_score(const Column& source, const TargetView& target) const;

  const DefaultReasonerConfig& config() const { return config_; }

 private:
  bool forced_accept(const MatchCandidate& match, const Column& source,
                     const TargetView& target) const;

  DefaultReasonerConfig config_;
  const MatcherRegistry* registry_;
};

inline constexpr std::size_t kAssessmentAlternatives = 5;

/// Runs the four-step pipeline. Throws kUnknownAttribute, and
/// kReasonerContract when the reasoner picks a candidate it was not offered.
Assessment assess_match(const MatchCandidate& match, const Dataset& source,
                        const MatchTarget& target, const Reasoner& reasoner,
                        const MatcherRegistry& registry = default_registry());

struct AssessAllResult {
  SchemaMatchSet matches;
  std::map<std::string, Assessment> assessments;  // by source attribute
};

/// Assesses every auto_ok / ai_corrected entry. Entries the user accepted,
/// edited or rejected are left alone. Corrections that collide on a target
/// are resolved by combined score; the loser is rejected and its assessment
/// marked questionable.
AssessAllResult assess_all(const SchemaMatchSet& matches, const Dataset& source,
                           const MatchTarget& target, const Reasoner& reasoner,
                           const MatcherRegistry& registry = default_registry());

/// Vertical rendering of the provenance flow followed by the rationale.
std::string explain_match(const MatchCandidate& match, const Assessment& assessment);

}  // namespace harmonkit

#endif  // HARMONKIT_ASSESSMENT_HPP_

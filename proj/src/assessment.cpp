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

#include "harmonkit/assessment.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "harmonkit/similarity.hpp"
#include "harmonkit/text.hpp"

namespace harmonkit {
namespace {

std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

std::string describe(const MatchCandidate& c) {
  return c.source_attribute + " -> " + c.target_attribute + " (score " + fixed3(c.score) + ", " +
         c.matcher_id + ")";
}

std::string summarize_preview(const DomainPreview& p) {
  std::ostringstream out;
  out << column_kind_name(p.kind);
  if (p.permissible_values) {
    out << ", " << p.permissible_values->size() << " permissible values";
  } else {
    out << ", " << p.sample_values.size() << " sample values";
  }
  if (!p.sample_values.empty()) {
    out << ": ";
    const std::size_t shown = std::min<std::size_t>(p.sample_values.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) out << (i ? ", " : "") << p.sample_values[i];
    if (p.sample_values.size() > shown) out << ", ...";
  }
  return out.str();
}

std::string summarize_ranking(const std::vector<MatchCandidate>& ranked) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    out << (i ? "; " : "") << ranked[i].target_attribute << " " << fixed3(ranked[i].score);
  }
  return out.str();
}

std::vector<std::string> comparable_source_values(const Column& source) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const std::string& v : source.distinct_values()) {
    if (is_null_like(v)) continue;
    if (seen.insert(normalize_text(v)).second) out.push_back(v);
  }
  return out;
}

}  // namespace

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kOk: return "ok";
    case Verdict::kCorrected: return "corrected";
    case Verdict::kQuestionable: return "questionable";
  }
  return "ok";
}

Verdict parse_verdict(std::string_view name) {
  if (name == "ok") return Verdict::kOk;
  if (name == "corrected") return Verdict::kCorrected;
  if (name == "questionable") return Verdict::kQuestionable;
  throw Error(ErrorCode::kInvalidArgument, "unknown verdict '" + std::string(name) + "'");
}

DefaultReasoner::DefaultReasoner(DefaultReasonerConfig config, const MatcherRegistry& registry)
    : config_(config), registry_(&registry) {}

double DefaultReasoner::name_score(const Column& source, const TargetView& target) const {
  const double lev = levenshtein_similarity(source.name(), target.name);
  const double jac = token_jaccard(source.name(), target.name);
  const double emb = embedding_similarity(registry_->embedder(), source.name(), target.name);
  return (lev + jac + emb) / 3.0;
}

double DefaultReasoner::domain_compatibility(const Column& source, const TargetView& target) const {
  if (target.kind == ColumnKind::kNumeric) return source.kind() == ColumnKind::kNumeric ? 1.0 : 0.0;
  if (!target.domain || target.domain->empty()) return config_.open_domain_compatibility;
  const std::vector<std::string> values = comparable_source_values(source);
  if (values.empty()) return config_.open_domain_compatibility;
  double total = 0.0;
  for (const std::string& v : values) {
    double best = 0.0;
    for (const std::string& d : *target.domain) best = std::max(best, token_jaccard(v, d));
    total += best;
  }
  return total / static_cast<double>(values.size());
}

double DefaultReasoner::combined_score(const Column& source, const TargetView& target) const {
  return 0.5 * name_score(source, target) + 0.5 * domain_compatibility(source, target);
}

bool DefaultReasoner::forced_accept(const MatchCandidate& match, const Column& source,
                                    const TargetView& target) const {
  if (match.score < config_.forced_accept_score) return false;
  if (!target.from_model || !target.domain) return false;
  std::set<std::string> permissible;
  for (const std::string& d : *target.domain) permissible.insert(normalize_text(d));
  for (const std::string& v : comparable_source_values(source)) {
    if (!permissible.count(normalize_text(v))) return false;
  }
  return true;
}

ReasonerDecision DefaultReasoner::decide(const ReasonerRequest& request) const {
  if (request.source_column == nullptr || request.target == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "default reasoner needs the source column and target");
  }
  const Column& source = *request.source_column;
  const TargetView original = target_view(*request.target, request.match.target_attribute);

  if (forced_accept(request.match, source, original)) {
    return {request.match,
            "original retained: score " + fixed3(request.match.score) + " >= " +
                fixed3(config_.forced_accept_score) + " and every source value is permissible",
            false};
  }

  const double original_name = name_score(source, original);
  const double original_domain = domain_compatibility(source, original);
  const double original_combined = 0.5 * original_name + 0.5 * original_domain;

  const MatchCandidate* best = nullptr;
  double best_combined = -1.0, best_name = 0.0, best_domain = 0.0;
  for (const MatchCandidate& alt : request.alternatives) {
    if (alt.target_attribute == request.match.target_attribute) continue;
    const TargetView view = target_view(*request.target, alt.target_attribute);
    const double n = name_score(source, view);
    const double d = domain_compatibility(source, view);
    const double c = 0.5 * n + 0.5 * d;
    if (c > best_combined) {
      best = &alt;
      best_combined = c;
      best_name = n;
      best_domain = d;
    }
  }

  const std::string original_scores = "combined " + fixed3(original_combined) + " (name " +
                                      fixed3(original_name) + ", domain " + fixed3(original_domain) + ")";
  if (best != nullptr && best_combined >= original_combined + config_.margin) {
    return {*best,
            "selected " + best->target_attribute + ": combined " + fixed3(best_combined) + " (name " +
                fixed3(best_name) + ", domain " + fixed3(best_domain) + ") exceeds " +
                request.match.target_attribute + " " + original_scores + " by at least " +
                fixed3(config_.margin),
            false};
  }
  std::string rationale = "original retained: " + original_scores;
  if (best != nullptr) {
    rationale += "; best alternative " + best->target_attribute + " combined " + fixed3(best_combined) +
                 " (name " + fixed3(best_name) + ", domain " + fixed3(best_domain) + ")";
  }
  return {request.match, rationale, false};
}

Assessment assess_match(const MatchCandidate& match, const Dataset& source, const MatchTarget& target,
                        const Reasoner& reasoner, const MatcherRegistry& registry) {
  const Column& column = source.column(match.source_attribute);
  target_view(target, match.target_attribute);

  Assessment assessment;
  assessment.original = match;
  std::vector<ProvenanceStep>& steps = assessment.flow.steps;
  steps.push_back({"match_schema", match.source_attribute, describe(match)});

  ReasonerRequest request;
  request.match = match;
  request.preview = preview_domain(target, match.target_attribute);
  steps.push_back({"preview_domain", match.target_attribute, summarize_preview(request.preview)});

  request.alternatives = rank_schema_matches(source, target, match.source_attribute,
                                             kAssessmentAlternatives, matchers::kEnsemble, registry);
  steps.push_back({"rank_schema_matches",
                   match.source_attribute + ", k=" + std::to_string(kAssessmentAlternatives) + ", " +
                       std::string(matchers::kEnsemble),
                   summarize_ranking(request.alternatives)});

  request.source_column = &column;
  request.target = &target;
  ReasonerDecision decision = reasoner.decide(request);

  // The reasoner may only keep the original or pick an offered alternative.
  const MatchCandidate* chosen = nullptr;
  if (decision.chosen.source_attribute == match.source_attribute &&
      decision.chosen.target_attribute == match.target_attribute) {
    chosen = &match;
  } else {
    for (const MatchCandidate& alt : request.alternatives) {
      if (alt.source_attribute == decision.chosen.source_attribute &&
          alt.target_attribute == decision.chosen.target_attribute) {
        chosen = &alt;
        break;
      }
    }
  }
  if (chosen == nullptr) {
    throw Error(ErrorCode::kReasonerContract,
                "reasoner '" + reasoner.name() + "' chose " + decision.chosen.source_attribute + " -> " +
                    decision.chosen.target_attribute + ", which was not offered");
  }

  const bool corrected = chosen != &match;
  steps.push_back({"assess_match", "reasoner " + reasoner.name(),
                   "final: " + chosen->target_attribute + (corrected ? " (corrected from " +
                                                                          match.target_attribute + ")"
                                                                    : " (kept)")});
  assessment.verdict = corrected ? Verdict::kCorrected : Verdict::kOk;
  if (corrected) assessment.corrected_candidate = *chosen;
  assessment.reason = decision.rationale;
  assessment.flow.final_choice = *chosen;
  assessment.flow.rationale = decision.rationale;
  assessment.fallback = decision.fallback;
  return assessment;
}

AssessAllResult assess_all(const SchemaMatchSet& matches, const Dataset& source, const MatchTarget& target,
                           const Reasoner& reasoner, const MatcherRegistry& registry) {
  AssessAllResult result;
  const DefaultReasoner arbiter({}, registry);
  std::vector<SchemaMatchEntry> entries = matches.entries();

  struct Pending {
    std::size_t index;
    MatchCandidate desired;
    double combined;
  };
  std::vector<Pending> pending;
  std::set<std::string> locked_targets;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const SchemaMatchEntry& entry = entries[i];
    if (entry.status == MatchStatus::kAutoOk || entry.status == MatchStatus::kAiCorrected) {
      Assessment a = assess_match(entry.candidate, source, target, reasoner, registry);
      MatchCandidate desired = a.corrected_candidate.value_or(entry.candidate);
      const double combined = arbiter.combined_score(source.column(desired.source_attribute),
                                                     target_view(target, desired.target_attribute));
      result.assessments.emplace(entry.candidate.source_attribute, std::move(a));
      pending.push_back({i, std::move(desired), combined});
    } else if (entry.status != MatchStatus::kRejected) {
      locked_targets.insert(entry.candidate.target_attribute);
    }
  }

  // Winner per target: highest combined score, earlier entry on ties.
  // Targets held by user-confirmed entries cannot be taken.
  std::map<std::string, std::size_t> winner;
  for (std::size_t p = 0; p < pending.size(); ++p) {
    const std::string& t = pending[p].desired.target_attribute;
    if (locked_targets.count(t)) continue;
    auto it = winner.find(t);
    if (it == winner.end() || pending[p].combined > pending[it->second].combined) winner[t] = p;
  }

  for (std::size_t p = 0; p < pending.size(); ++p) {
    SchemaMatchEntry& entry = entries[pending[p].index];
    Assessment& a = result.assessments.at(entry.candidate.source_attribute);
    const std::string& t = pending[p].desired.target_attribute;
    const auto it = winner.find(t);
    if (it == winner.end() || it->second != p) {
      std::string holder = "a confirmed match";
      if (it != winner.end()) holder = pending[it->second].desired.source_attribute;
      entry.candidate = pending[p].desired;
      entry.status = MatchStatus::kRejected;
      entry.reason = "conflicts with " + holder + " for " + t + " (combined " +
                     fixed3(pending[p].combined) + ")";
      a.verdict = Verdict::kQuestionable;
      a.reason = *entry.reason;
      continue;
    }
    if (a.verdict == Verdict::kCorrected) {
      entry.candidate = pending[p].desired;
      entry.status = MatchStatus::kAiCorrected;
      entry.reason = a.reason;
    } else if (entry.status == MatchStatus::kAutoOk) {
      entry.reason = a.reason;
    }
  }
  result.matches = SchemaMatchSet(std::move(entries));
  return result;
}

std::string explain_match(const MatchCandidate& match, const Assessment& assessment) {
  std::ostringstream out;
  out << "Assessment of " << match.source_attribute << " -> " << match.target_attribute << ": "
      << verdict_name(assessment.verdict);
  if (assessment.fallback) out << " (default reasoner fallback)";
  out << "\n";
  const auto& steps = assessment.flow.steps;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    out << "  " << (i + 1) << ". " << steps[i].primitive << "\n";
    out << "     in:  " << steps[i].input_summary << "\n";
    out << "     out: " << steps[i].output_summary << "\n";
    if (i + 1 < steps.size()) out << "     |\n";
  }
  const MatchCandidate& final_choice = assessment.flow.final_choice;
  out << "Final: " << final_choice.source_attribute << " -> " << final_choice.target_attribute;
  out << (assessment.verdict == Verdict::kCorrected ? " (corrected)" : " (original retained)") << "\n";
  out << "Why: " << assessment.reason << "\n";
  return out.str();
}

}  // namespace harmonkit

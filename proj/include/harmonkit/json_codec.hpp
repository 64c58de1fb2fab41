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

// Canonical JSON encodings of the result types. These are what the CLI
// prints with --format json and what the agent protocols return, so field
// names and order are stable.

#ifndef HARMONKIT_JSON_CODEC_HPP_
#define HARMONKIT_JSON_CODEC_HPP_

#include <string>

#include "json.hpp"

#include "harmonkit/assessment.hpp"
#include "harmonkit/core.hpp"
#include "harmonkit/schema_matching.hpp"
#include "harmonkit/value_matching.hpp"

namespace harmonkit {

using Json = nlohmann::ordered_json;

// Decoders throw kParseError on missing or mistyped fields.

void to_json(Json& j, const Cell& cell);
void from_json(const Json& j, Cell& cell);
void to_json(Json& j, const Column& column);
void from_json(const Json& j, Column& column);
void to_json(Json& j, const Dataset& data);
void from_json(const Json& j, Dataset& data);

void to_json(Json& j, const TargetAttribute& attribute);
void from_json(const Json& j, TargetAttribute& attribute);
void to_json(Json& j, const TargetModel& model);
void from_json(const Json& j, TargetModel& model);
void to_json(Json& j, const MatchTarget& target);
void from_json(const Json& j, MatchTarget& target);

void to_json(Json& j, const MatchCandidate& candidate);
void from_json(const Json& j, MatchCandidate& candidate);
// A SchemaMatchSet is a flat array of
// {source_attribute, target_attribute, score, matcher_id, status, reason}.
void to_json(Json& j, const SchemaMatchSet& set);
void from_json(const Json& j, SchemaMatchSet& set);

void to_json(Json& j, const AffineTransform& transform);
void from_json(const Json& j, AffineTransform& transform);
void to_json(Json& j, const ValueMatch& match);
void from_json(const Json& j, ValueMatch& match);
void to_json(Json& j, const ValueMatchSet& set);
void from_json(const Json& j, ValueMatchSet& set);
void to_json(Json& j, const Constraint& constraint);
void from_json(const Json& j, Constraint& constraint);

void to_json(Json& j, const MatcherDescriptor& descriptor);
void to_json(Json& j, const DomainPreview& preview);
void from_json(const Json& j, DomainPreview& preview);

void to_json(Json& j, const ProvenanceStep& step);
void from_json(const Json& j, ProvenanceStep& step);
void to_json(Json& j, const ProvenanceFlow& flow);
void from_json(const Json& j, ProvenanceFlow& flow);
void to_json(Json& j, const Assessment& assessment);
void from_json(const Json& j, Assessment& assessment);

/// Two-space indented dump with a trailing newline.
std::string dump_canonical(const Json& j);

}  // namespace harmonkit

#endif  // HARMONKIT_JSON_CODEC_HPP_

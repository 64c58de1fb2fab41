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

// Harmonization specifications: the declarative, reusable record of
// attribute correspondences and their value mappers.
//
// File format (.harmon.json), extended form:
//
//   {
//     "entries": [
//       {
//         "source_attribute": "FIGO_stage",
//         "target_attribute": "Pathologic_staging_primary_tumor_pt",
//         "mapper": { "IA": "pT1a (FIGO IA)" }
//       },
//       { ..., "mapper": { "type": "affine", "a": 1.8, "b": 32, "r2": 1 } },
//       { ..., "mapper": { "type": "identity" } }
//     ],
//     "metadata": { "created_at": "...", "tool_version": "...", "target_model": "..." }
//   }
//
// The bare form is just the list of entries with value-map mappers. A value
// map that itself has a "type" key is written as
// {"type": "value_map", "values": {...}} so it cannot be mistaken for a
// typed mapper.

#ifndef HARMONKIT_SPEC_HPP_
#define HARMONKIT_SPEC_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "harmonkit/core.hpp"

namespace harmonkit {

struct ValueMapper {
  std::vector<std::pair<std::string, std::string>> values;  // insertion order

  bool operator==(const ValueMapper&) const = default;
};

struct IdentityMapper {
  bool operator==(const IdentityMapper&) const = default;
};

using Mapper = std::variant<ValueMapper, AffineTransform, IdentityMapper>;

struct SpecEntry {
  std::string source_attribute;
  std::string target_attribute;
  Mapper mapper;

  bool operator==(const SpecEntry&) const = default;
};

struct SpecMetadata {
  std::string created_at;
  std::string tool_version;
  std::optional<std::string> target_model;

  bool operator==(const SpecMetadata&) const = default;
};

struct HarmonizationSpec {
  std::vector<SpecEntry> entries;
  std::optional<SpecMetadata> metadata;  // absent for bare-format input

  /// Throws kDuplicateAttribute or kInvalidArgument.
  void validate() const;
  bool operator==(const HarmonizationSpec&) const = default;
};

/// created_at = now (UTC, ISO 8601), tool_version = library version.
SpecMetadata make_metadata(std::optional<std::string> target_model = std::nullopt);

/// Entries follow the order of `matches`; rejected matches are dropped and
/// pairs without a value set get an identity mapper. Value sets with a
/// numeric transform become affine mappers. Throws kInconsistentInput when a
/// value set references a rejected or absent match.
HarmonizationSpec build_spec(const SchemaMatchSet& matches,
                             std::span<const ValueMatchSet> value_sets,
                             std::optional<SpecMetadata> metadata = std::nullopt);

enum class SpecFormat { kExtended, kLegacy };

/// Canonical JSON, two-space indent, trailing newline. kLegacy emits the
/// bare entry list and throws kInvalidArgument unless every mapper is a
/// plain value map.
std::string serialize_spec(const HarmonizationSpec& spec,
                           SpecFormat format = SpecFormat::kExtended);

bool is_legacy_compatible(const HarmonizationSpec& spec);

/// Accepts the extended and the bare form. Unknown fields are rejected.
/// Throws kParseError (with line or field path) and kDuplicateAttribute.
HarmonizationSpec parse_spec(std::string_view bytes);

enum class UnmappedPolicy { kKeepOriginal, kSetNull, kFail };

std::string_view unmapped_policy_name(UnmappedPolicy policy);
UnmappedPolicy parse_unmapped_policy(std::string_view name);

/// One output column per entry, named after the target attribute. Value maps
/// look up the normalized source value and write the mapper's target text
/// verbatim; nulls always stay null. Throws kMissingAttribute (listing every
/// missing column) and kUnmappedValue under kFail.
Dataset materialize(const HarmonizationSpec& spec, const Dataset& data,
                    UnmappedPolicy policy = UnmappedPolicy::kKeepOriginal);

}  // namespace harmonkit

#endif  // HARMONKIT_SPEC_HPP_

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

#include "harmonkit/error.hpp"

namespace harmonkit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnknownMatcher: return "UnknownMatcher";
    case ErrorCode::kUnknownAttribute: return "UnknownAttribute";
    case ErrorCode::kIncompatibleKinds: return "IncompatibleKinds";
    case ErrorCode::kEmptyDomain: return "EmptyDomain";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kUnknownSourceValue: return "UnknownSourceValue";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kInconsistentInput: return "InconsistentInput";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateAttribute: return "DuplicateAttribute";
    case ErrorCode::kMissingAttribute: return "MissingAttribute";
    case ErrorCode::kUnmappedValue: return "UnmappedValue";
    case ErrorCode::kRaggedRow: return "RaggedRow";
    case ErrorCode::kDuplicateHeader: return "DuplicateHeader";
    case ErrorCode::kEncodingError: return "EncodingError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kOneToOneViolation: return "OneToOneViolation";
    case ErrorCode::kReasonerContract: return "ReasonerContract";
    case ErrorCode::kUnknownSession: return "UnknownSession";
    case ErrorCode::kRevisionConflict: return "RevisionConflict";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) { return code != ErrorCode::kIoError; }

}  // namespace harmonkit

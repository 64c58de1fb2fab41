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

#ifndef HARMONKIT_ERROR_HPP_
#define HARMONKIT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace harmonkit {

// Stable error identifiers. The string form (error_code_name) is part of the
// CLI and protocol surface; do not rename.
enum class ErrorCode {
  kInvalidArgument,
  kUnknownMatcher,
  kUnknownAttribute,
  kIncompatibleKinds,
  kEmptyDomain,
  kDegenerateInput,
  kUnknownSourceValue,
  kDomainViolation,
  kInconsistentInput,
  kParseError,
  kDuplicateAttribute,
  kMissingAttribute,
  kUnmappedValue,
  kRaggedRow,
  kDuplicateHeader,
  kEncodingError,
  kValidationError,
  kTooFewRows,
  kOneToOneViolation,
  kReasonerContract,
  kUnknownSession,
  kRevisionConflict,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// True for errors caused by the caller's input (CLI exit code 2); false for
// environment failures such as unreadable files (exit code 1).
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace harmonkit

#endif  // HARMONKIT_ERROR_HPP_

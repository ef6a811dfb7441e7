// Copyright 2026 The egoqa Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace egoqa {

enum class ErrorCode {
  kNoIntervalData,
  kUnknownClip,
  kEmptyInput,
  kEmptyTrack,
  kTemplateMismatch,
  kEndpointUnavailable,
  kMissingDistractors,
  kLengthMismatch,
  kNotADistribution,
  kMissingQuery,
  kRunLengthMismatch,
  kEmptyEvaluation,
  kEmbedderUnavailable,
  kUnreadableInput,
  kSchemaMismatch,
  kEmptyCorpus,
  kInvalidArgument,
  kInvariantBreach,
};

std::string_view ErrorCodeName(ErrorCode code);

/// Exception carrying a machine-readable code. All library faults use it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// CLI exit codes: 0 success, 2 input validation, 3 endpoint failure,
/// 4 internal invariant breach.
int ExitCodeFor(ErrorCode code);

}  // namespace egoqa

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

#include "egoqa/error.hpp"

namespace egoqa {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoIntervalData: return "NoIntervalData";
    case ErrorCode::kUnknownClip: return "UnknownClip";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyTrack: return "EmptyTrack";
    case ErrorCode::kTemplateMismatch: return "TemplateMismatch";
    case ErrorCode::kEndpointUnavailable: return "EndpointUnavailable";
    case ErrorCode::kMissingDistractors: return "MissingDistractors";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNotADistribution: return "NotADistribution";
    case ErrorCode::kMissingQuery: return "MissingQuery";
    case ErrorCode::kRunLengthMismatch: return "RunLengthMismatch";
    case ErrorCode::kEmptyEvaluation: return "EmptyEvaluation";
    case ErrorCode::kEmbedderUnavailable: return "EmbedderUnavailable";
    case ErrorCode::kUnreadableInput: return "UnreadableInput";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvariantBreach: return "InvariantBreach";
  }
  return "Unknown";
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEndpointUnavailable:
    case ErrorCode::kEmbedderUnavailable:
      return 3;
    case ErrorCode::kInvariantBreach:
      return 4;
    default:
      return 2;
  }
}

}  // namespace egoqa

// Copyright 2026 The Detox Authors.
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

#include "detox/error.h"

namespace detox {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyVocab: return "EmptyVocab";
    case ErrorCode::kInvalidToken: return "InvalidToken";
    case ErrorCode::kCorruptCorpus: return "CorruptCorpus";
    case ErrorCode::kEmptyIndex: return "EmptyIndex";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kSubsampleTooLarge: return "SubsampleTooLarge";
    case ErrorCode::kCandidatePoolEmpty: return "CandidatePoolEmpty";
    case ErrorCode::kEmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorCode::kRemoteUnavailable: return "RemoteUnavailable";
    case ErrorCode::kRemoteProtocol: return "RemoteProtocol";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroNorm: return "ZeroNorm";
    case ErrorCode::kNotANumber: return "NotANumber";
    case ErrorCode::kLogic: return "Logic";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace detox

/*
 * Copyright 2026 The ACE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ace/error.hpp"

namespace ace {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kDegenerateExplanation: return "degenerate-explanation";
    case ErrorCode::kNumericalFailure: return "numerical-failure";
    case ErrorCode::kScorerUnavailable: return "scorer-unavailable";
    case ErrorCode::kProtocolViolation: return "protocol-violation";
  }
  return "unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInsufficientData:
      return 2;
    case ErrorCode::kScorerUnavailable:
    case ErrorCode::kProtocolViolation:
      return 3;
    case ErrorCode::kDegenerateExplanation:
    case ErrorCode::kNumericalFailure:
      return 4;
  }
  return 2;
}

}  // namespace ace

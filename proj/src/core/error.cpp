// Copyright 2026 The Sphinx Authors.
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

#include "sphinx/core/error.hpp"

namespace sphinx {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kInvariantError: return "INVARIANT_ERROR";
    case ErrorCode::kDuplicateCaseId: return "DUPLICATE_CASE_ID";
    case ErrorCode::kIoError: return "IO_ERROR";
    case ErrorCode::kTemplateError: return "TEMPLATE_ERROR";
    case ErrorCode::kMissingSlot: return "MISSING_SLOT";
    case ErrorCode::kExtraSlot: return "EXTRA_SLOT";
    case ErrorCode::kProviderError: return "PROVIDER_ERROR";
    case ErrorCode::kCacheMiss: return "CACHE_MISS";
    case ErrorCode::kNoListFound: return "NO_LIST_FOUND";
    case ErrorCode::kNotANumber: return "NOT_A_NUMBER";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kRateLimited: return "RATE_LIMITED";
    case ErrorCode::kAuthError: return "AUTH_ERROR";
    case ErrorCode::kParseFailed: return "PARSE_FAILED";
    case ErrorCode::kEmptyOutput: return "EMPTY_OUTPUT";
    case ErrorCode::kInsufficientCases: return "INSUFFICIENT_CASES";
    case ErrorCode::kEmptyPartition: return "EMPTY_PARTITION";
    case ErrorCode::kInvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::kJudgeUnparseable: return "JUDGE_UNPARSEABLE";
  }
  return "UNKNOWN";
}

}  // namespace sphinx

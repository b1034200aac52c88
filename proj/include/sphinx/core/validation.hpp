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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sphinx/core/types.hpp"

namespace sphinx {

enum class Violation {
  kMissingRepoId,
  kInvalidPrNumber,
  kMissingDescription,
  kMissingDiff,
  kMissingOriginalCode,
  kMissingMergedCode,
  kInvalidFileCount,
};

std::string_view to_string(Violation v);

/// Completeness check. Violations come back in declaration order; an empty
/// list means the record is complete.
using ValidationReport = std::vector<Violation>;

ValidationReport validate_record(const PullRequestRecord& record);

/// "MISSING_DESCRIPTION,MISSING_DIFF"
std::string join_violations(const ValidationReport& report);

}  // namespace sphinx

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

#include "sphinx/core/validation.hpp"

namespace sphinx {

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::kMissingRepoId: return "MISSING_REPO_ID";
    case Violation::kInvalidPrNumber: return "INVALID_PR_NUMBER";
    case Violation::kMissingDescription: return "MISSING_DESCRIPTION";
    case Violation::kMissingDiff: return "MISSING_DIFF";
    case Violation::kMissingOriginalCode: return "MISSING_ORIGINAL_CODE";
    case Violation::kMissingMergedCode: return "MISSING_MERGED_CODE";
    case Violation::kInvalidFileCount: return "INVALID_FILE_COUNT";
  }
  return "UNKNOWN";
}

ValidationReport validate_record(const PullRequestRecord& record) {
  ValidationReport report;
  if (record.repo_id.empty()) report.push_back(Violation::kMissingRepoId);
  if (record.pr_number <= 0) report.push_back(Violation::kInvalidPrNumber);
  if (record.description.empty()) report.push_back(Violation::kMissingDescription);
  if (record.gt_diff.empty()) report.push_back(Violation::kMissingDiff);
  if (record.original_code.empty()) report.push_back(Violation::kMissingOriginalCode);
  if (record.merged_code.empty()) report.push_back(Violation::kMissingMergedCode);
  if (record.file_count < 1) report.push_back(Violation::kInvalidFileCount);
  return report;
}

std::string join_violations(const ValidationReport& report) {
  std::string out;
  for (Violation v : report) {
    if (!out.empty()) out.push_back(',');
    out.append(to_string(v));
  }
  return out;
}

}  // namespace sphinx

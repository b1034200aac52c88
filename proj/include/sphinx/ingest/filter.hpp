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

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphinx/core/text.hpp"
#include "sphinx/core/types.hpp"
#include "sphinx/llm/prompt_runner.hpp"

namespace sphinx::ingest {

inline constexpr std::int64_t kDefaultTokenLimit = 32768;

enum class FilterStage { kCompleteness, kMerged, kLength, kSafety };

std::string_view to_string(FilterStage stage);

struct FilterDecision {
  std::string case_id;
  FilterStage stage = FilterStage::kCompleteness;
  bool kept = false;
  std::string reason;  // non-empty when dropped

  friend bool operator==(const FilterDecision&, const FilterDecision&) = default;
};

nlohmann::json to_json(const FilterDecision& d);

struct IngestSpec {
  std::vector<std::string> repos;
  std::set<Language> languages{kAllLanguages.begin(), kAllLanguages.end()};
  std::int64_t max_prs = 1000;
  std::int64_t token_limit = kDefaultTokenLimit;
  TokenStrategy token_strategy = TokenStrategy::kBytesPerFour;

  /// INVALID_CONFIG on a non-positive limit or an empty language set.
  void validate() const;
};

FilterDecision filter_completeness(const PullRequestRecord& record);
FilterDecision filter_merged(const PullRequestRecord& record);

/// Tokens counted by the length stage: description, every linked issue body
/// and the original file, concatenated.
std::size_t length_budget_tokens(const PullRequestRecord& record, const TokenEstimator& estimator);

/// Kept iff exactly one file changed and the token budget is within the
/// limit (inclusive).
FilterDecision filter_length(const PullRequestRecord& record, std::int64_t token_limit,
                             const TokenEstimator& estimator = TokenEstimator{});

/// Verdict parsing for the safety screen. nullopt when unparseable.
struct SafetyVerdict {
  bool safe = false;
  std::string reason;
};
std::optional<SafetyVerdict> parse_safety_verdict(std::string_view text);

/// Fail-closed: an unparseable verdict drops the record. Provider errors
/// propagate.
FilterDecision filter_safety(const PullRequestRecord& record, llm::PromptRunner& runner);

struct RecordError {
  std::string case_id;
  std::string message;
};

struct FilterResult {
  std::vector<PullRequestRecord> kept;
  std::vector<FilterDecision> decisions;  // input order, then stage order
  std::vector<RecordError> errors;
};

/// Completeness -> Merged -> Length -> Safety, stopping at the first drop.
/// Records are screened in parallel; output order follows the input.
FilterResult run_filter_pipeline(std::span<const PullRequestRecord> records, const IngestSpec& spec,
                                 llm::PromptRunner& runner, int jobs = 0);

/// Single-threaded reference of run_filter_pipeline.
FilterResult run_filter_pipeline_serial(std::span<const PullRequestRecord> records,
                                        const IngestSpec& spec, llm::PromptRunner& runner);

}  // namespace sphinx::ingest

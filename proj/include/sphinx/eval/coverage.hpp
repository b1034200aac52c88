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

#include <span>
#include <string>
#include <string_view>

#include "sphinx/core/types.hpp"
#include "sphinx/llm/prompt_runner.hpp"

namespace sphinx::eval {

/// Default weight of the buggy partition.
inline constexpr double kDefaultLambda = 0.9;

/// Checklist-coverage score in [0, 100]:
///   100 * (lambda * mean_buggy(S/N) + (1 - lambda) * mean_bugfree(S/N))
/// A partition may be empty only when its weight is exactly zero; otherwise
/// EMPTY_PARTITION. lambda outside [0, 1] is INVALID_CONFIG.
double coverage_score(std::span<const CaseJudgement> judgements, double lambda = kDefaultLambda);

/// Text bound to the judge prompt's checklist slot. Bug-free checklists are
/// rendered as 'No checklist', the sentinel the judge prompt branches on.
std::string judge_checklist_text(const Checklist& checklist);

struct JudgeOutcome {
  CaseJudgement judgement;
  std::string raw_output;
  bool clamped = false;      // judge returned a count above N or below 0
  bool unparseable = false;  // JUDGE_UNPARSEABLE: scored 0
  int attempts = 0;
};

/// Maps one raw judge answer onto a covered count in [0, N]. Returns false
/// when the text is not a single integer.
bool interpret_judge_output(std::string_view raw, std::int64_t checklist_size,
                            std::int64_t& covered, bool& clamped);

/// Asks the judge how many checklist items `review` covers. An unparseable
/// answer is retried once, then scored 0 with `unparseable` set. Provider
/// errors propagate.
JudgeOutcome judge_coverage(std::string_view review, const Checklist& checklist,
                            llm::PromptRunner& runner, const std::string& judge_model,
                            std::string case_id = {});

}  // namespace sphinx::eval

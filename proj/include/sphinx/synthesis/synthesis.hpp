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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphinx/core/types.hpp"
#include "sphinx/llm/prompt_runner.hpp"

namespace sphinx::synthesis {

enum class Step { kInstruction, kPseudoSolution, kReview, kChecklist };

std::string_view to_string(Step step);

/// Raw model output and retry count of one step. Filled by the gen_*
/// functions when passed.
struct StepLog {
  std::string raw;
  int retries = 0;
  bool llm_called = false;
};

/// Issue text handed to the instruction prompt; "None" without linked issues.
std::string issue_info_text(const PullRequestRecord& record);

/// Reads {problem_definition, code_editing_requirement: [...]}, either bare or
/// wrapped in a one-element array. Tolerates trailing commas. PARSE_FAILED on
/// any other shape.
ReviewInstruction parse_instruction(std::string_view completion);

/// Plain-text rendering of an instruction for the pseudo-solution prompt.
std::string instruction_text(const ReviewInstruction& instruction);

/// Retries once on a parse failure. Throws PARSE_FAILED or PROVIDER_ERROR.
ReviewInstruction gen_instruction(const PullRequestRecord& record, llm::PromptRunner& runner,
                                  StepLog* log = nullptr);

/// Code payload of a completion: the longest fenced block if any, otherwise
/// the whole text when it reads as code. nullopt for prose.
std::optional<std::string> extract_code(std::string_view completion);

struct PseudoSolution {
  std::string code;
  bool identical = false;  // same as the original file
};

/// Throws EMPTY_OUTPUT when no code survives extraction after one retry.
PseudoSolution gen_pseudo_solution(const PullRequestRecord& record,
                                   const ReviewInstruction& instruction, llm::PromptRunner& runner,
                                   StepLog* log = nullptr);

/// "No comment." without a model call when the two files are byte-identical.
/// A completion that only says "No comment" is normalized to the literal.
std::string gen_review(std::string_view pseudo, std::string_view merged, llm::PromptRunner& runner,
                       StepLog* log = nullptr);

/// True when the first word of an item is plausibly an imperative verb.
bool starts_with_action_verb(std::string_view item);

/// Bug-free reviews map to the no-comment checklist without a model call.
/// Throws NO_LIST_FOUND after one retry. Items not led by a verb are logged
/// and appended to `warnings` when given.
Checklist gen_checklist(std::string_view review, llm::PromptRunner& runner, StepLog* log = nullptr,
                        std::vector<std::string>* warnings = nullptr);

struct SynthesisTrace {
  std::string case_id;
  std::map<Step, std::string> step_outputs;
  std::map<Step, int> retries;
  std::optional<Step> failed_at;  // nullopt means Complete
  std::string failure;            // error code and message on failure
  std::vector<std::string> warnings;

  bool complete() const noexcept { return !failed_at.has_value(); }
};

nlohmann::json to_json(const SynthesisTrace& trace);

struct SynthesisOutcome {
  std::optional<SphinxCase> sphinx_case;
  SynthesisTrace trace;
};

/// Runs the four steps in order and stops at the first failure. An
/// identical pseudo solution fails the PseudoSolution step.
SynthesisOutcome synthesize_case(const PullRequestRecord& record, llm::PromptRunner& runner);

/// Cases are synthesized concurrently; output order follows the input.
std::vector<SynthesisOutcome> synthesize_batch(std::span<const PullRequestRecord> records,
                                               llm::PromptRunner& runner, int jobs = 0);

std::vector<SynthesisOutcome> synthesize_batch_serial(std::span<const PullRequestRecord> records,
                                                      llm::PromptRunner& runner);

}  // namespace sphinx::synthesis

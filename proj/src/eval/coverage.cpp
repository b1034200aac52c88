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

#include "sphinx/eval/coverage.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "sphinx/core/error.hpp"
#include "sphinx/core/serialize.hpp"
#include "sphinx/core/text.hpp"
#include "sphinx/llm/output_parse.hpp"

namespace sphinx::eval {

double coverage_score(std::span<const CaseJudgement> judgements, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "lambda must lie in [0, 1]");
  }
  double buggy_sum = 0.0;
  double clean_sum = 0.0;
  std::size_t buggy_n = 0;
  std::size_t clean_n = 0;
  for (const auto& j : judgements) {
    check_judgement_invariants(j);
    const double frac = static_cast<double>(j.covered_count) / static_cast<double>(j.checklist_size);
    if (j.buggy) {
      buggy_sum += frac;
      ++buggy_n;
    } else {
      clean_sum += frac;
      ++clean_n;
    }
  }
  if (buggy_n == 0 && lambda != 0.0) {
    throw Error(ErrorCode::kEmptyPartition, "no buggy judgements but lambda > 0");
  }
  if (clean_n == 0 && lambda != 1.0) {
    throw Error(ErrorCode::kEmptyPartition, "no bug-free judgements but lambda < 1");
  }
  double score = 0.0;
  if (buggy_n > 0) score += lambda * (buggy_sum / static_cast<double>(buggy_n));
  if (clean_n > 0) score += (1.0 - lambda) * (clean_sum / static_cast<double>(clean_n));
  return 100.0 * score;
}

std::string judge_checklist_text(const Checklist& checklist) {
  if (checklist.is_no_comment()) return "'No checklist'";
  return dump_line(json(checklist.items()));
}

bool interpret_judge_output(std::string_view raw, std::int64_t checklist_size,
                            std::int64_t& covered, bool& clamped) {
  std::int64_t value = 0;
  try {
    value = llm::parse_single_integer(raw);
  } catch (const Error&) {
    return false;
  }
  clamped = value < 0 || value > checklist_size;
  covered = std::clamp<std::int64_t>(value, 0, checklist_size);
  return true;
}

JudgeOutcome judge_coverage(std::string_view review, const Checklist& checklist,
                            llm::PromptRunner& runner, const std::string& judge_model,
                            std::string case_id) {
  JudgeOutcome out;
  out.judgement.case_id = std::move(case_id);
  out.judgement.checklist_size = static_cast<std::int64_t>(checklist.size());
  out.judgement.buggy = !checklist.is_no_comment();

  const llm::Bindings bindings = {{"checklist", judge_checklist_text(checklist)},
                                  {"review", std::string(review)}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto completion = runner.run(llm::kJudgeCount, bindings, judge_model, attempt);
    out.raw_output = completion.text;
    out.attempts = attempt + 1;
    std::int64_t covered = 0;
    bool clamped = false;
    if (interpret_judge_output(completion.text, out.judgement.checklist_size, covered, clamped)) {
      out.judgement.covered_count = covered;
      out.clamped = clamped;
      if (clamped) {
        spdlog::warn("judge count '{}' clamped to {} for case '{}'", trim(completion.text), covered,
                     out.judgement.case_id);
      }
      return out;
    }
  }
  spdlog::warn("judge output unparseable for case '{}': '{}'", out.judgement.case_id,
               out.raw_output.substr(0, 80));
  out.unparseable = true;
  out.judgement.covered_count = 0;
  return out;
}

}  // namespace sphinx::eval

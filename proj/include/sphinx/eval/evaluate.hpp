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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphinx/core/types.hpp"
#include "sphinx/eval/coverage.hpp"
#include "sphinx/llm/prompt_runner.hpp"

namespace sphinx::eval {

struct EvalConfig {
  double lambda = kDefaultLambda;
  std::string judge_model_id = "o3-mini";
  std::string candidate_model_id = "gpt-4o";
  int jobs = 0;

  /// INVALID_CONFIG unless 0 <= lambda <= 1.
  void validate() const;
};

/// What the candidate model sees: PR metadata, the original file and the code
/// under review (the pseudo solution). Never the merged code or checklist.
llm::Bindings candidate_bindings(const SphinxCase& c);

std::string gen_candidate_review(const SphinxCase& c, llm::PromptRunner& runner,
                                 const std::string& candidate_model);

struct CaseEvaluation {
  std::string case_id;
  Language language = Language::kPython;
  std::string candidate_review;
  CaseJudgement judgement;
  double bleu1 = 0.0;
  double rouge_l = 0.0;
  bool clamped = false;
  bool judge_unparseable = false;
  /// Set when the case could not be evaluated; the case then scores 0.
  std::optional<std::string> error;
};

struct LanguageScore {
  Language language = Language::kPython;
  std::size_t buggy_cases = 0;
  std::size_t bugfree_cases = 0;
  double coverage = 0.0;  // [0, 100]
  double bleu1 = 0.0;     // [0, 1]
  double rouge_l = 0.0;   // [0, 1]
};

struct EvaluationReport {
  double lambda = kDefaultLambda;
  std::vector<CaseEvaluation> cases;       // benchmark order
  std::vector<LanguageScore> languages;    // kAllLanguages order, present languages only
  double coverage = 0.0;                   // unweighted mean over languages
  double bleu1 = 0.0;                      // mean over all cases
  double rouge_l = 0.0;                    // mean over all cases
  std::size_t incomplete_cases = 0;
};

/// Pure aggregation of already-judged cases.
EvaluationReport aggregate_report(std::vector<CaseEvaluation> cases, double lambda);

/// Candidate generation, judging and lexical metrics for every case, run in
/// parallel; per-case failures are recorded on the case, never thrown.
EvaluationReport evaluate_model(std::span<const SphinxCase> benchmark, const EvalConfig& config,
                                llm::PromptRunner& runner);

/// Same as evaluate_model on a single thread. Reference for tests.
EvaluationReport evaluate_model_serial(std::span<const SphinxCase> benchmark,
                                       const EvalConfig& config, llm::PromptRunner& runner);

nlohmann::json to_json(const EvaluationReport& report);

/// Table with the columns BLEU-1 Avg, ROUGE-L Avg, then checklist coverage
/// for JS, Java, C++, Python, C# and Avg; scores x100 with two decimals.
std::string format_table(const EvaluationReport& report, const std::string& model_name);

}  // namespace sphinx::eval

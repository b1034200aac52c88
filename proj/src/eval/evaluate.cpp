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

#include "sphinx/eval/evaluate.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sphinx/core/error.hpp"
#include "sphinx/eval/metrics.hpp"
#include "sphinx/util/parallel.hpp"

namespace sphinx::eval {
namespace {

using json = nlohmann::json;

CaseEvaluation evaluate_case(const SphinxCase& c, const EvalConfig& config,
                             llm::PromptRunner& runner) {
  CaseEvaluation out;
  out.case_id = c.id();
  out.language = c.record.language;
  out.judgement.case_id = out.case_id;
  out.judgement.buggy = c.buggy;
  out.judgement.checklist_size = static_cast<std::int64_t>(c.checklist.size());
  try {
    out.candidate_review = gen_candidate_review(c, runner, config.candidate_model_id);
    const auto verdict =
        judge_coverage(out.candidate_review, c.checklist, runner, config.judge_model_id, out.case_id);
    out.judgement = verdict.judgement;
    out.clamped = verdict.clamped;
    out.judge_unparseable = verdict.unparseable;
  } catch (const Error& e) {
    spdlog::error("evaluation failed for {}: {}", out.case_id, e.what());
    out.error = e.what();
    out.judgement.covered_count = 0;
  }
  const auto h = tokenize(out.candidate_review);
  const auto r = tokenize(c.review);
  out.bleu1 = bleu1_tokens(h, r);
  out.rouge_l = rouge_l_tokens(h, r);
  return out;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string_view table_label(Language l) {
  switch (l) {
    case Language::kJavaScript: return "JS";
    case Language::kJava: return "Java";
    case Language::kCpp: return "C++";
    case Language::kPython: return "Python";
    case Language::kCSharp: return "C#";
  }
  return "?";
}

}  // namespace

void EvalConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "lambda must lie in [0, 1]");
  }
}

llm::Bindings candidate_bindings(const SphinxCase& c) {
  return {{"pr_metadata", pr_metadata_text(c.record)},
          {"original_code", c.record.original_code},
          {"generated_code", c.pseudo_solution}};
}

std::string gen_candidate_review(const SphinxCase& c, llm::PromptRunner& runner,
                                 const std::string& candidate_model) {
  return runner.run(llm::kCandidateReview, candidate_bindings(c), candidate_model).text;
}

EvaluationReport aggregate_report(std::vector<CaseEvaluation> cases, double lambda) {
  EvaluationReport report;
  report.lambda = lambda;
  std::vector<double> all_bleu;
  std::vector<double> all_rouge;
  for (const auto& ce : cases) {
    all_bleu.push_back(ce.bleu1);
    all_rouge.push_back(ce.rouge_l);
    if (ce.error) ++report.incomplete_cases;
  }
  report.bleu1 = mean(all_bleu);
  report.rouge_l = mean(all_rouge);

  std::vector<double> language_scores;
  for (Language lang : kAllLanguages) {
    std::vector<CaseJudgement> judgements;
    std::vector<double> bleu;
    std::vector<double> rouge;
    LanguageScore score;
    score.language = lang;
    for (const auto& ce : cases) {
      if (ce.language != lang) continue;
      judgements.push_back(ce.judgement);
      bleu.push_back(ce.bleu1);
      rouge.push_back(ce.rouge_l);
      (ce.judgement.buggy ? score.buggy_cases : score.bugfree_cases)++;
    }
    if (judgements.empty()) continue;
    score.coverage = coverage_score(judgements, lambda);
    score.bleu1 = mean(bleu);
    score.rouge_l = mean(rouge);
    language_scores.push_back(score.coverage);
    report.languages.push_back(score);
  }
  report.coverage = mean(language_scores);
  report.cases = std::move(cases);
  return report;
}

EvaluationReport evaluate_model(std::span<const SphinxCase> benchmark, const EvalConfig& config,
                                llm::PromptRunner& runner) {
  config.validate();
  std::vector<CaseEvaluation> cases(benchmark.size());
  parallel_for(benchmark.size(), config.jobs,
               [&](std::size_t i) { cases[i] = evaluate_case(benchmark[i], config, runner); });
  return aggregate_report(std::move(cases), config.lambda);
}

EvaluationReport evaluate_model_serial(std::span<const SphinxCase> benchmark,
                                       const EvalConfig& config, llm::PromptRunner& runner) {
  config.validate();
  std::vector<CaseEvaluation> cases;
  cases.reserve(benchmark.size());
  for (const auto& c : benchmark) cases.push_back(evaluate_case(c, config, runner));
  return aggregate_report(std::move(cases), config.lambda);
}

json to_json(const EvaluationReport& report) {
  json cases = json::array();
  for (const auto& ce : report.cases) {
    json row = {
        {"case_id", ce.case_id},
        {"language", std::string(to_string(ce.language))},
        {"candidate_review", ce.candidate_review},
        {"covered_count", ce.judgement.covered_count},
        {"checklist_size", ce.judgement.checklist_size},
        {"buggy", ce.judgement.buggy},
        {"bleu1", ce.bleu1},
        {"rouge_l", ce.rouge_l},
        {"clamped", ce.clamped},
        {"judge_unparseable", ce.judge_unparseable},
    };
    row["error"] = ce.error ? json(*ce.error) : json(nullptr);
    cases.push_back(std::move(row));
  }
  json languages = json::array();
  for (const auto& ls : report.languages) {
    languages.push_back({{"language", std::string(to_string(ls.language))},
                         {"buggy_cases", ls.buggy_cases},
                         {"bugfree_cases", ls.bugfree_cases},
                         {"coverage", ls.coverage},
                         {"bleu1", ls.bleu1},
                         {"rouge_l", ls.rouge_l}});
  }
  return {{"lambda", report.lambda},
          {"coverage", report.coverage},
          {"bleu1", report.bleu1},
          {"rouge_l", report.rouge_l},
          {"incomplete_cases", report.incomplete_cases},
          {"languages", std::move(languages)},
          {"cases", std::move(cases)}};
}

std::string format_table(const EvaluationReport& report, const std::string& model_name) {
  static constexpr Language kColumns[] = {Language::kJavaScript, Language::kJava, Language::kCpp,
                                          Language::kPython, Language::kCSharp};
  std::string out = fmt::format("{:<24} | {:>7} | {:>7}", "Model", "BLEU-1", "ROUGE-L");
  for (Language l : kColumns) out += fmt::format(" | {:>7}", table_label(l));
  out += fmt::format(" | {:>7}\n", "Avg.");
  out += fmt::format("{:<24} | {:>7.2f} | {:>7.2f}", model_name, 100.0 * report.bleu1,
                     100.0 * report.rouge_l);
  for (Language l : kColumns) {
    const auto it = std::find_if(report.languages.begin(), report.languages.end(),
                                 [&](const LanguageScore& s) { return s.language == l; });
    out += it == report.languages.end() ? fmt::format(" | {:>7}", "-")
                                        : fmt::format(" | {:>7.2f}", it->coverage);
  }
  out += fmt::format(" | {:>7.2f}\n", report.coverage);
  return out;
}

}  // namespace sphinx::eval

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


#include "sphinx/synthesis/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <spdlog/spdlog.h>

#include "sphinx/core/error.hpp"
#include "sphinx/core/serialize.hpp"
#include "sphinx/core/text.hpp"
#include "sphinx/llm/output_parse.hpp"
#include "sphinx/util/parallel.hpp"

namespace sphinx::synthesis {
namespace {

using nlohmann::json;

// Removes commas that directly precede a closing bracket, outside strings.
std::string strip_trailing_commas(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      out.push_back(ch);
      if (ch == '\\' && i + 1 < text.size()) {
        out.push_back(text[++i]);
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') in_string = true;
    if (ch == ',') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && (text[j] == '}' || text[j] == ']')) continue;
    }
    out.push_back(ch);
  }
  return out;
}

const json* instruction_object(const json& j) {
  const json* obj = &j;
  if (j.is_array()) {
    if (j.size() != 1) return nullptr;
    obj = &j.front();
  }
  if (!obj->is_object()) return nullptr;
  const auto blank = [](const json& v) { return !v.is_string() || trim_view(v.get_ref<const std::string&>()).empty(); };
  if (!obj->contains("problem_definition") || blank(obj->at("problem_definition"))) return nullptr;
  if (!obj->contains("code_editing_requirement")) return nullptr;
  const auto& edits = obj->at("code_editing_requirement");
  if (!edits.is_array() || edits.empty()) return nullptr;
  for (const auto& e : edits) {
    if (!e.is_object() || !e.contains("modification_target") || !e.contains("modification_logic") ||
        blank(e.at("modification_target")) || blank(e.at("modification_logic"))) {
      return nullptr;
    }
  }
  return obj;
}

bool is_no_comment_text(std::string_view text) {
  std::string_view t = trim_view(text);
  while (!t.empty() && (t.front() == '"' || t.front() == '\'' || t.front() == '*')) t.remove_prefix(1);
  while (!t.empty() && (t.back() == '"' || t.back() == '\'' || t.back() == '*' || t.back() == '.')) {
    t.remove_suffix(1);
  }
  return t.size() == 10 && starts_with_icase(t, "no comment");
}

constexpr std::array<std::string_view, 24> kCodeLeads = {
    "def ",     "class ",   "import ",  "from ",    "#include", "package ", "using ",   "namespace ",
    "public ",  "private ", "protected ", "static ", "function ", "const ",  "let ",     "var ",
    "return",   "if ",      "if(",      "for ",     "for(",     "while ",   "@",        "//"};

bool code_line(std::string_view line) {
  const std::string_view t = trim_view(line);
  if (t.empty()) return false;
  for (const auto lead : kCodeLeads) {
    if (t.substr(0, lead.size()) == lead) return true;
  }
  const char last = t.back();
  return last == ';' || last == '{' || last == '}' || last == ')' ||
         (last == ':' && t.find(' ') != std::string_view::npos && t.find('(') != std::string_view::npos) ||
         t.find(" = ") != std::string_view::npos;
}

bool prose_line(std::string_view line) {
  const std::string_view t = trim_view(line);
  if (t.size() < 12 || !std::isupper(static_cast<unsigned char>(t.front()))) return false;
  const char last = t.back();
  if (last != '.' && last != '!' && last != '?' && last != ',') return false;
  return std::count(t.begin(), t.end(), ' ') >= 3;
}

template <typename F>
auto with_retry(StepLog* log, F&& attempt) {
  for (int retry = 0;; ++retry) {
    try {
      if (log) log->retries = retry;
      return attempt(retry);
    } catch (const Error& e) {
      const bool parse_failure = e.code() == ErrorCode::kParseFailed ||
                                 e.code() == ErrorCode::kEmptyOutput ||
                                 e.code() == ErrorCode::kNoListFound;
      if (!parse_failure || retry >= 1) throw;
    }
  }
}

}  // namespace

std::string_view to_string(Step step) {
  switch (step) {
    case Step::kInstruction: return "Instruction";
    case Step::kPseudoSolution: return "PseudoSolution";
    case Step::kReview: return "Review";
    case Step::kChecklist: return "Checklist";
  }
  return "Instruction";
}

std::string issue_info_text(const PullRequestRecord& record) {
  if (record.linked_issues.empty()) return "None";
  std::string out;
  for (const auto& issue : record.linked_issues) {
    if (!out.empty()) out += "\n\n";
    out += "#" + issue.id + ": " + issue.body;
  }
  return out;
}

ReviewInstruction parse_instruction(std::string_view completion) {
  const auto accept = [](const json& j) { return instruction_object(j) != nullptr; };
  auto found = llm::find_json(completion, accept);
  if (!found) found = llm::find_json(strip_trailing_commas(completion), accept);
  if (!found) throw Error(ErrorCode::kParseFailed, "no instruction JSON in completion");
  const json& obj = *instruction_object(*found);
  ReviewInstruction out;
  out.problem_definition = trim(obj.at("problem_definition").get<std::string>());
  for (const auto& e : obj.at("code_editing_requirement")) {
    out.edits.push_back({trim(e.at("modification_target").get<std::string>()),
                         trim(e.at("modification_logic").get<std::string>())});
  }
  return out;
}

std::string instruction_text(const ReviewInstruction& instruction) {
  std::string out = "Problem Definition: " + instruction.problem_definition + "\n\nCode Editing Requirement:";
  for (std::size_t i = 0; i < instruction.edits.size(); ++i) {
    const auto& e = instruction.edits[i];
    out += "\n" + std::to_string(i + 1) + ". " + e.modification_target + ": " + e.modification_logic;
  }
  return out;
}

ReviewInstruction gen_instruction(const PullRequestRecord& record, llm::PromptRunner& runner,
                                  StepLog* log) {
  const llm::Bindings bindings = {{"pr_metadata", pr_metadata_text(record)},
                                  {"issue_info", issue_info_text(record)},
                                  {"gt_code_diff", record.gt_diff}};
  return with_retry(log, [&](int retry) {
    const auto c = runner.run(llm::kInstructionGen, bindings, runner.models().generator, retry);
    if (log) {
      log->raw = c.text;
      log->llm_called = true;
    }
    return parse_instruction(c.text);
  });
}

std::optional<std::string> extract_code(std::string_view completion) {
  const auto blocks = llm::fenced_blocks(completion);
  const std::string* best = nullptr;
  for (const auto& b : blocks) {
    if (!trim_view(b).empty() && (!best || b.size() > best->size())) best = &b;
  }
  if (best) return *best;
  if (blocks.empty()) {
    std::size_t code = 0;
    std::size_t prose = 0;
    for (const auto line : split_lines(completion)) {
      if (code_line(line)) {
        ++code;
      } else if (prose_line(line)) {
        ++prose;
      }
    }
    if (code > 0 && code >= prose) return std::string(completion);
  }
  return std::nullopt;
}

PseudoSolution gen_pseudo_solution(const PullRequestRecord& record,
                                   const ReviewInstruction& instruction, llm::PromptRunner& runner,
                                   StepLog* log) {
  const llm::Bindings bindings = {{"instruction", instruction_text(instruction)},
                                  {"original_code", record.original_code}};
  return with_retry(log, [&](int retry) {
    const auto c = runner.run(llm::kPseudoSolution, bindings, runner.models().generator, retry);
    if (log) {
      log->raw = c.text;
      log->llm_called = true;
    }
    auto code = extract_code(c.text);
    if (!code || trim_view(*code).empty()) {
      throw Error(ErrorCode::kEmptyOutput, "no code in pseudo-solution completion");
    }
    PseudoSolution out;
    out.code = std::move(*code);
    // Fences swallow the final newline; keep the file's convention.
    if (record.original_code.ends_with('\n') && !out.code.ends_with('\n')) out.code.push_back('\n');
    const auto strip_end = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    out.identical = strip_end(out.code) == strip_end(record.original_code);
    return out;
  });
}

std::string gen_review(std::string_view pseudo, std::string_view merged, llm::PromptRunner& runner,
                       StepLog* log) {
  if (pseudo == merged) {
    if (log) log->raw = std::string(kNoComment);
    return std::string(kNoComment);
  }
  const llm::Bindings bindings = {{"generated_code", std::string(pseudo)},
                                  {"merged_code", std::string(merged)}};
  return with_retry(log, [&](int retry) {
    const auto c = runner.run(llm::kReviewGen, bindings, runner.models().generator, retry);
    if (log) {
      log->raw = c.text;
      log->llm_called = true;
    }
    if (trim_view(c.text).empty()) throw Error(ErrorCode::kEmptyOutput, "empty review");
    if (is_no_comment_text(c.text)) return std::string(kNoComment);
    return trim(c.text);
  });
}

bool starts_with_action_verb(std::string_view item) {
  std::string_view t = trim_view(item);
  while (!t.empty() && (t.front() == '*' || t.front() == '"' || t.front() == '\'' || t.front() == '`')) {
    t.remove_prefix(1);
  }
  std::size_t n = 0;
  while (n < t.size() && std::isalpha(static_cast<unsigned char>(t[n]))) ++n;
  if (n < 2) return false;
  std::string word(t.substr(0, n));
  std::transform(word.begin(), word.end(), word.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  static constexpr std::array<std::string_view, 22> kNotVerbs = {
      "the",  "a",       "an",    "this",  "that",    "these",  "those", "it",
      "its",  "there",   "no",    "not",   "missing", "we",     "you",   "i",
      "our",  "variable", "function", "method", "code", "when"};
  return std::find(kNotVerbs.begin(), kNotVerbs.end(), word) == kNotVerbs.end() &&
         !(word.size() > 2 && word.ends_with("ly"));
}

Checklist gen_checklist(std::string_view review, llm::PromptRunner& runner, StepLog* log,
                        std::vector<std::string>* warnings) {
  if (trim_view(review) == kNoComment) {
    if (log) log->raw = std::string(kNoComment);
    return Checklist::no_comment();
  }
  const llm::Bindings bindings = {{"review", std::string(review)}};
  auto items = with_retry(log, [&](int retry) {
    const auto c = runner.run(llm::kChecklistGen, bindings, runner.models().generator, retry);
    if (log) {
      log->raw = c.text;
      log->llm_called = true;
    }
    std::vector<std::string> kept;
    for (auto& item : llm::parse_list_output(c.text)) {
      std::string t = trim(item);
      if (t.empty() || t == kNoComment) continue;
      kept.push_back(std::move(t));
    }
    if (kept.empty()) throw Error(ErrorCode::kNoListFound, "checklist has no actionable items");
    return kept;
  });
  for (const auto& item : items) {
    if (!starts_with_action_verb(item)) {
      spdlog::warn("checklist item does not start with an action verb: '{}'", item.substr(0, 60));
      if (warnings) warnings->push_back("NON_VERB_ITEM: " + item);
    }
  }
  return Checklist::from_items(std::move(items));
}

nlohmann::json to_json(const SynthesisTrace& trace) {
  json outputs = json::object();
  for (const auto& [step, text] : trace.step_outputs) outputs[std::string(to_string(step))] = text;
  json retries = json::object();
  for (const auto& [step, n] : trace.retries) retries[std::string(to_string(step))] = n;
  json j = {{"case_id", trace.case_id},
            {"step_outputs", std::move(outputs)},
            {"retries", std::move(retries)},
            {"status", trace.complete() ? "Complete"
                                        : "FailedAtStep(" + std::string(to_string(*trace.failed_at)) + ")"},
            {"warnings", trace.warnings}};
  if (!trace.complete()) j["failure"] = trace.failure;
  return j;
}

SynthesisOutcome synthesize_case(const PullRequestRecord& record, llm::PromptRunner& runner) {
  SynthesisOutcome out;
  auto& trace = out.trace;
  trace.case_id = case_id(record);
  Step step = Step::kInstruction;
  StepLog log;
  const auto finish_step = [&](Step s) {
    trace.step_outputs[s] = log.raw;
    trace.retries[s] = log.retries;
    log = StepLog{};
  };
  try {
    SphinxCase c;
    c.record = record;
    c.instruction = gen_instruction(record, runner, &log);
    finish_step(step);

    step = Step::kPseudoSolution;
    auto pseudo = gen_pseudo_solution(record, c.instruction, runner, &log);
    finish_step(step);
    if (pseudo.identical) {
      trace.failed_at = step;
      trace.failure = "IDENTICAL_OUTPUT: pseudo solution equals the original file";
      spdlog::warn("synthesis of {} failed at {}: {}", trace.case_id, to_string(step), trace.failure);
      return out;
    }
    c.pseudo_solution = std::move(pseudo.code);

    step = Step::kReview;
    c.review = gen_review(c.pseudo_solution, record.merged_code, runner, &log);
    finish_step(step);

    step = Step::kChecklist;
    c.checklist = gen_checklist(c.review, runner, &log, &trace.warnings);
    finish_step(step);

    c.buggy = !c.checklist.is_no_comment();
    c.category = Category::kUnclassified;
    check_case_invariants(c);
    out.sphinx_case = std::move(c);
  } catch (const Error& e) {
    if (!trace.step_outputs.count(step) && !log.raw.empty()) finish_step(step);
    trace.failed_at = step;
    trace.failure = e.what();
    spdlog::warn("synthesis of {} failed at {}: {}", trace.case_id, to_string(step), trace.failure);
  }
  return out;
}

std::vector<SynthesisOutcome> synthesize_batch(std::span<const PullRequestRecord> records,
                                               llm::PromptRunner& runner, int jobs) {
  std::vector<SynthesisOutcome> out(records.size());
  parallel_for(records.size(), jobs, [&](std::size_t i) { out[i] = synthesize_case(records[i], runner); });
  return out;
}

std::vector<SynthesisOutcome> synthesize_batch_serial(std::span<const PullRequestRecord> records,
                                                      llm::PromptRunner& runner) {
  std::vector<SynthesisOutcome> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(synthesize_case(r, runner));
  return out;
}

}  // namespace sphinx::synthesis

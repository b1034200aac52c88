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


#include "scripted.hpp"

#include <regex>

#include <nlohmann/json.hpp>

#include "sphinx/core/error.hpp"

namespace sphinx::testing {

PromptKind classify_prompt(std::string_view prompt) {
  struct Lead {
    std::string_view text;
    PromptKind kind;
  };
  static constexpr Lead kLeads[] = {
      {"Problem Definition:", PromptKind::kInstruction},
      {"You will be provided with a partial code base", PromptKind::kPseudoSolution},
      {"You are presented with two versions of code", PromptKind::kReview},
      {"Based on the following code reviews", PromptKind::kChecklist},
      {"You are an expert software engineer performing a code review", PromptKind::kCandidate},
      {"You are given a checklist", PromptKind::kJudge},
      {"You are screening pull-request data", PromptKind::kSafety},
      {"Classify the following merged pull request", PromptKind::kClassify},
  };
  for (const auto& lead : kLeads) {
    if (prompt.starts_with(lead.text)) return lead.kind;
  }
  return PromptKind::kUnknown;
}

bool is_retry(std::string_view prompt) { return prompt.ends_with(llm::kRetryNote); }

std::string between(std::string_view text, std::string_view open, std::string_view close) {
  const auto a = text.find(open);
  if (a == std::string_view::npos) return "";
  const auto start = a + open.size();
  const auto b = text.find(close, start);
  if (b == std::string_view::npos) return std::string(text.substr(start));
  return std::string(text.substr(start, b - start));
}

void ScriptedProvider::add(Rule rule) {
  std::lock_guard lock(mu_);
  rules_.push_back(std::move(rule));
}

void ScriptedProvider::reply(PromptKind kind, std::string text) {
  add([kind, text = std::move(text)](PromptKind k, const llm::CompletionRequest&) -> std::optional<std::string> {
    if (k == kind) return text;
    return std::nullopt;
  });
}

llm::ProviderReply ScriptedProvider::complete(const llm::CompletionRequest& request) {
  const PromptKind kind = classify_prompt(request.prompt);
  std::vector<Rule> rules;
  {
    std::lock_guard lock(mu_);
    log_.push_back(kind);
    rules = rules_;
  }
  for (const auto& rule : rules) {
    if (auto text = rule(kind, request)) {
      return {*text, {static_cast<std::int64_t>(request.prompt.size() / 4),
                      static_cast<std::int64_t>(text->size() / 4)}};
    }
  }
  throw ProviderError(500, false, "no scripted reply");
}

std::vector<PromptKind> ScriptedProvider::calls() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::size_t ScriptedProvider::count(PromptKind kind) const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(std::count(log_.begin(), log_.end(), kind));
}

void ScriptedProvider::clear_log() {
  std::lock_guard lock(mu_);
  log_.clear();
}

Harness::Harness(llm::GatewayConfig config)
    : provider(std::make_shared<ScriptedProvider>()),
      templates(llm::default_prompts_dir()),
      gateway(std::move(config), provider),
      runner(gateway, templates) {}

// ---- pipeline fixture ----

namespace {

std::string comment_prefix(Language lang) { return lang == Language::kPython ? "#" : "//"; }

std::string extension(Language lang) {
  switch (lang) {
    case Language::kJava: return "java";
    case Language::kJavaScript: return "js";
    case Language::kCpp: return "cpp";
    case Language::kCSharp: return "cs";
    case Language::kPython: return "py";
  }
  return "txt";
}

std::string function_body(Language lang, std::int64_t n, int k) {
  const std::string name = "compute_" + std::to_string(n);
  const std::string inc = std::to_string(k + 1);
  switch (lang) {
    case Language::kPython: return "def " + name + "(x):\n    return x + " + inc + "\n";
    case Language::kJavaScript: return "function " + name + "(x) {\n  return x + " + inc + ";\n}\n";
    case Language::kJava:
    case Language::kCSharp:
      return "public static int " + name + "(int x) {\n  return x + " + inc + ";\n}\n";
    case Language::kCpp: return "int " + name + "(int x) {\n  return x + " + inc + ";\n}\n";
  }
  return "";
}

std::string title_for(Language lang, int k, std::int64_t n) {
  const std::string fn = "compute_" + std::to_string(n);
  switch (k) {
    case 0: return "Document " + fn;
    case 1: return "Fix negative input handling in " + fn;
    case 2:
      return lang == Language::kCpp ? "Update build notes for " + fn : "Add input validation option to " + fn;
    case 3: return lang == Language::kCpp ? "Fix overflow in " + fn : "Refactor " + fn + " helpers";
    default: return "Touch " + fn;
  }
}

int reply_hash(std::string_view text) {
  unsigned sum = 0;
  for (const unsigned char ch : text) sum = sum * 31 + ch;
  return static_cast<int>(sum % 1000);
}

std::optional<std::string> world_reply(PromptKind kind, const llm::CompletionRequest& req) {
  const std::string& p = req.prompt;
  switch (kind) {
    case PromptKind::kSafety:
      return p.find("slur-fixture") != std::string::npos ? "UNSAFE: slurs" : "SAFE";

    case PromptKind::kInstruction: {
      const std::string title = between(p, "Problem Statement:\n\n", "\n");
      std::smatch m;
      std::string target = "compute";
      static const std::regex kFn(R"(compute_\d+)");
      if (std::regex_search(title, m, kFn)) target = m.str();
      if (title.starts_with("Fix negative") && title.find("_100") != std::string::npos && !is_retry(p)) {
        return "Sure! I will summarise the change below once you confirm.";
      }
      nlohmann::json j = nlohmann::json::array(
          {{{"problem_definition", title + "."},
            {"code_editing_requirement",
             {{{"modification_target", target}, {"modification_logic", "Reject negative input before computing."}}}}}});
      return "```json\n" + j.dump(2) + "\n```";
    }

    case PromptKind::kPseudoSolution: {
      const std::string original = between(p, "<code>\n", "\n</code>");
      if (original.find("kind: clean") != std::string::npos) return "```\n" + fixture_merged(original) + "```";
      const std::string c = original.starts_with("#") ? "#" : "//";
      return "```\n" + original + "\n" + c + " validate: TODO\n```";
    }

    case PromptKind::kReview: {
      std::string review =
          "1. The generated version leaves a TODO where the reference rejects negative input.\n"
          "2. The generated helper name drifts from the naming used by the reference version.";
      if (reply_hash(p) % 2 == 1) {
        review += "\n3. There is no test covering negative input in the generated version.";
      }
      return review;
    }

    case PromptKind::kChecklist: {
      const std::string review = between(p, "actual code review to generate the checklist:\n\n",
                                         "\n\nReturn only the checklist");
      nlohmann::json items = {
          "Add validation that rejects negative input (matches the reference behaviour)",
          "Rename the helper to follow the reference naming (keeps naming consistent)"};
      if (review.find("\n3. ") != std::string::npos) {
        items.push_back("Add a unit test for negative input (prevents regressions)");
      }
      return items.dump(4);
    }

    case PromptKind::kClassify: {
      const std::string meta = between(p, "Pull request metadata:\n\n", "\n");
      if (meta.starts_with("Fix")) return "Bug Fix";
      if (meta.starts_with("Add")) return "Feature / Improvement";
      if (meta.starts_with("Refactor")) return "**Refactor / Maintenance**";
      return "Other";
    }

    case PromptKind::kCandidate: {
      const auto at = p.find("LLM-generated code:\n");
      const std::string generated = at == std::string::npos ? "" : p.substr(at + 20);
      if (generated.find("validate: reject") != std::string::npos) {
        if (generated.starts_with("#")) return "```json\n[\"Consider renaming the helper.\"]\n```";
        return "No comment.";
      }
      return "```json\n[\"Replace the TODO with input validation that rejects negative input.\", "
             "\"Add a test for negative input.\"]\n```";
    }

    case PromptKind::kJudge: {
      const std::string checklist = between(p, "Checklist: ", "\n\nCode review: ");
      const std::string review = between(p, "\n\nCode review: ", "\n\n**Only output the number.**");
      if (checklist == "'No checklist'") {
        return review.find("No comment") != std::string::npos ? "1" : "0";
      }
      const auto n = static_cast<int>(nlohmann::json::parse(checklist).size());
      return std::to_string(reply_hash(checklist + review) % (n + 2));
    }

    default: return std::nullopt;
  }
}

}  // namespace

std::string fixture_merged(std::string_view original) {
  const std::string c = original.starts_with("#") ? "#" : "//";
  return std::string(original) + "\n" + c + " validate: reject negative input\n";
}

std::vector<PullRequestRecord> fixture_records() {
  std::vector<PullRequestRecord> out;
  for (const Language lang : kAllLanguages) {
    const std::string slug(file_slug(lang));
    const std::string c = comment_prefix(lang);
    for (int k = 0; k < 5; ++k) {
      PullRequestRecord r;
      r.repo_id = "fixture/" + slug + "-service";
      r.pr_number = 100 + k;
      r.language = lang;
      r.title = title_for(lang, k, r.pr_number);
      r.description = "Keeps compute_" + std::to_string(r.pr_number) + " well defined for every input.";
      if (k == 1) {
        r.description += " Closes #7.";
        r.linked_issues.push_back({"7", "compute returns garbage for negative values"});
      }
      const std::string kind = k == 0 ? "clean" : "buggy";
      r.original_code = c + " fixture file for " + slug + " pr " + std::to_string(r.pr_number) + "\n" + c +
                        " kind: " + kind + "\n" + function_body(lang, r.pr_number, k);
      r.merged_code = fixture_merged(r.original_code);
      const std::string path = "src/compute_" + std::to_string(r.pr_number) + "." + extension(lang);
      r.gt_diff = "--- a/" + path + "\n+++ b/" + path + "\n@@ -4,0 +5,2 @@\n+\n+" + c +
                  " validate: reject negative input\n";
      r.merged = true;
      r.file_count = 1;
      if (k == 4) {
        switch (lang) {
          case Language::kJava: r.merged = false; break;
          case Language::kJavaScript: r.file_count = 2; break;
          case Language::kCpp: r.description += " (contains slur-fixture text)"; break;
          case Language::kCSharp: r.gt_diff.clear(); break;
          case Language::kPython: r.original_code += std::string(140000, 'x') + "\n"; break;
        }
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::shared_ptr<llm::Provider> fixture_world() {
  auto p = std::make_shared<ScriptedProvider>();
  p->add(world_reply);
  return p;
}

}  // namespace sphinx::testing

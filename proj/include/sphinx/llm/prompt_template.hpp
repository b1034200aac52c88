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

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace sphinx::llm {

/// A prompt body with `{slot}` placeholders. `{{` and `}}` render as literal
/// braces; a brace that does not open a well-formed `{identifier}` is kept
/// as-is.
struct PromptTemplate {
  std::string template_id;
  std::string version = "1";
  std::string provenance;
  std::string body;
  std::set<std::string> required_slots;
};

using Bindings = std::map<std::string, std::string>;

/// Slot names referenced by a template body.
std::set<std::string> scan_slots(std::string_view body);

/// Builds a template from an in-memory body; slots are taken from the body.
PromptTemplate make_template(std::string template_id, std::string body,
                             std::string provenance = "invented");

/// Parses the on-disk format: a `---` delimited front-matter header with
/// `template_id`, `version`, `provenance` and `required_slots` (comma list),
/// followed by the body. Throws TEMPLATE_ERROR when the declared slots and the
/// body's placeholders disagree.
PromptTemplate parse_template(std::string_view text);
PromptTemplate load_template(const std::filesystem::path& path);

/// Throws MISSING_SLOT / EXTRA_SLOT unless `bindings` covers exactly the
/// template's required slots.
std::string render_prompt(const PromptTemplate& tmpl, const Bindings& bindings);

/// Every `*.tmpl` file in a directory, keyed by template_id.
class TemplateLibrary {
 public:
  TemplateLibrary() = default;
  explicit TemplateLibrary(const std::filesystem::path& dir);

  void add(PromptTemplate tmpl);
  const PromptTemplate& get(const std::string& template_id) const;
  bool contains(const std::string& template_id) const;
  const std::map<std::string, PromptTemplate>& all() const noexcept { return templates_; }

 private:
  std::map<std::string, PromptTemplate> templates_;
};

/// Directory of the prompt files shipped with the project, overridable with
/// SPHINX_PROMPTS_DIR.
std::filesystem::path default_prompts_dir();

// Template ids used across the pipeline.
inline constexpr const char* kInstructionGen = "instruction_gen";
inline constexpr const char* kPseudoSolution = "pseudo_solution";
inline constexpr const char* kReviewGen = "review_gen";
inline constexpr const char* kChecklistGen = "checklist_gen";
inline constexpr const char* kCandidateReview = "candidate_review";
inline constexpr const char* kJudgeCount = "judge_count";
inline constexpr const char* kSafetyScreen = "safety_screen";
inline constexpr const char* kClassifyCategory = "classify_category";

}  // namespace sphinx::llm

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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sphinx {

/// The literal review (and sole checklist item) of a bug-free case.
inline constexpr std::string_view kNoComment = "No comment.";

enum class Language { kJava, kJavaScript, kCpp, kCSharp, kPython };

inline constexpr std::array<Language, 5> kAllLanguages = {
    Language::kJava, Language::kJavaScript, Language::kCpp, Language::kCSharp,
    Language::kPython};

/// Wire name, e.g. "CSharp".
std::string_view to_string(Language language);
/// Lower-case form used in corpus file names, e.g. "csharp".
std::string_view file_slug(Language language);
std::optional<Language> language_from_string(std::string_view name);
/// Maps a source path to its language by extension; nullopt if unsupported.
std::optional<Language> language_from_path(std::string_view path);

enum class Category { kUnclassified, kBugFix, kFeatureImprovement, kRefactorMaintenance, kOther };

inline constexpr std::array<Category, 4> kBuggyCategories = {
    Category::kBugFix, Category::kFeatureImprovement, Category::kRefactorMaintenance,
    Category::kOther};

std::string_view to_string(Category category);
std::optional<Category> category_from_string(std::string_view name);

struct IssueRef {
  std::string id;
  std::string body;

  friend bool operator==(const IssueRef&, const IssueRef&) = default;
};

/// One crawled pull request, restricted to a single modified file.
struct PullRequestRecord {
  std::string repo_id;
  std::int64_t pr_number = 0;
  Language language = Language::kPython;
  std::string title;
  std::string description;
  std::vector<IssueRef> linked_issues;
  std::string gt_diff;
  std::string original_code;
  std::string merged_code;
  bool merged = false;
  std::int64_t file_count = 1;

  friend bool operator==(const PullRequestRecord&, const PullRequestRecord&) = default;
};

/// "repo_id#pr_number"
std::string case_id(const PullRequestRecord& record);

/// Title and description joined by a blank line, as shown to prompts.
std::string pr_metadata_text(const PullRequestRecord& record);

struct CodeEdit {
  std::string modification_target;
  std::string modification_logic;

  friend bool operator==(const CodeEdit&, const CodeEdit&) = default;
};

struct ReviewInstruction {
  std::string problem_definition;
  std::vector<CodeEdit> edits;

  friend bool operator==(const ReviewInstruction&, const ReviewInstruction&) = default;
};

/// Ordered verification points. Either the single "No comment." item of a
/// bug-free case, or one or more real items none of which is "No comment.".
class Checklist {
 public:
  /// The bug-free checklist.
  static Checklist no_comment();
  /// Throws INVARIANT_ERROR on an empty list, an empty item, or a list that
  /// mixes "No comment." with other items. `{"No comment."}` yields the
  /// bug-free checklist.
  static Checklist from_items(std::vector<std::string> items);

  const std::vector<std::string>& items() const noexcept { return items_; }
  bool is_no_comment() const noexcept { return is_no_comment_; }
  std::size_t size() const noexcept { return items_.size(); }

  friend bool operator==(const Checklist&, const Checklist&) = default;

 private:
  Checklist(std::vector<std::string> items, bool is_no_comment)
      : items_(std::move(items)), is_no_comment_(is_no_comment) {}

  std::vector<std::string> items_;
  bool is_no_comment_ = false;
};

/// A synthesized training/benchmark instance.
struct SphinxCase {
  PullRequestRecord record;
  ReviewInstruction instruction;
  std::string pseudo_solution;
  std::string review;
  Checklist checklist = Checklist::no_comment();
  bool buggy = false;
  Category category = Category::kUnclassified;

  std::string id() const { return case_id(record); }

  friend bool operator==(const SphinxCase&, const SphinxCase&) = default;
};

/// Judge outcome for one case: S items covered out of N.
struct CaseJudgement {
  std::string case_id;
  std::int64_t covered_count = 0;
  std::int64_t checklist_size = 1;
  bool buggy = false;

  friend bool operator==(const CaseJudgement&, const CaseJudgement&) = default;
};

/// Throws INVARIANT_ERROR if the case breaks the bugginess/review/checklist
/// agreement.
void check_case_invariants(const SphinxCase& c);

/// Throws INVARIANT_ERROR when S or N is out of range.
void check_judgement_invariants(const CaseJudgement& j);

}  // namespace sphinx

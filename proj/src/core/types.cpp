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

#include "sphinx/core/types.hpp"

#include <algorithm>
#include <cctype>

#include "sphinx/core/error.hpp"

namespace sphinx {

std::string_view to_string(Language language) {
  switch (language) {
    case Language::kJava: return "Java";
    case Language::kJavaScript: return "JavaScript";
    case Language::kCpp: return "Cpp";
    case Language::kCSharp: return "CSharp";
    case Language::kPython: return "Python";
  }
  return "Python";
}

std::string_view file_slug(Language language) {
  switch (language) {
    case Language::kJava: return "java";
    case Language::kJavaScript: return "javascript";
    case Language::kCpp: return "cpp";
    case Language::kCSharp: return "csharp";
    case Language::kPython: return "python";
  }
  return "python";
}

std::optional<Language> language_from_string(std::string_view name) {
  for (Language l : kAllLanguages) {
    if (name == to_string(l) || name == file_slug(l)) return l;
  }
  if (name == "C++") return Language::kCpp;
  if (name == "C#") return Language::kCSharp;
  return std::nullopt;
}

std::optional<Language> language_from_path(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  std::string ext(path.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (ext == "java") return Language::kJava;
  if (ext == "js" || ext == "jsx" || ext == "mjs" || ext == "cjs") return Language::kJavaScript;
  if (ext == "cpp" || ext == "cc" || ext == "cxx" || ext == "hpp" || ext == "hh" || ext == "h" ||
      ext == "hxx") {
    return Language::kCpp;
  }
  if (ext == "cs") return Language::kCSharp;
  if (ext == "py") return Language::kPython;
  return std::nullopt;
}

std::string_view to_string(Category category) {
  switch (category) {
    case Category::kUnclassified: return "Unclassified";
    case Category::kBugFix: return "BugFix";
    case Category::kFeatureImprovement: return "FeatureImprovement";
    case Category::kRefactorMaintenance: return "RefactorMaintenance";
    case Category::kOther: return "Other";
  }
  return "Unclassified";
}

std::optional<Category> category_from_string(std::string_view name) {
  for (Category c : {Category::kUnclassified, Category::kBugFix, Category::kFeatureImprovement,
                     Category::kRefactorMaintenance, Category::kOther}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

std::string pr_metadata_text(const PullRequestRecord& record) {
  std::string metadata = record.title;
  if (!record.description.empty()) {
    if (!metadata.empty()) metadata += "\n\n";
    metadata += record.description;
  }
  return metadata;
}

std::string case_id(const PullRequestRecord& record) {
  return record.repo_id + "#" + std::to_string(record.pr_number);
}

Checklist Checklist::no_comment() { return Checklist({std::string(kNoComment)}, true); }

Checklist Checklist::from_items(std::vector<std::string> items) {
  if (items.empty()) throw Error(ErrorCode::kInvariantError, "checklist has no items");
  if (items.size() == 1 && items.front() == kNoComment) return no_comment();
  for (const auto& item : items) {
    if (item.empty()) throw Error(ErrorCode::kInvariantError, "checklist item is empty");
    if (item == kNoComment) {
      throw Error(ErrorCode::kInvariantError, "\"No comment.\" mixed with real checklist items");
    }
  }
  return Checklist(std::move(items), false);
}

void check_case_invariants(const SphinxCase& c) {
  if (c.record.pr_number <= 0) throw Error(ErrorCode::kInvariantError, "pr_number must be positive");
  if (c.record.file_count < 1) throw Error(ErrorCode::kInvariantError, "file_count must be >= 1");
  if (c.buggy == c.checklist.is_no_comment()) {
    throw Error(ErrorCode::kInvariantError, "buggy flag disagrees with checklist for " + c.id());
  }
  if (c.buggy != (c.review != kNoComment)) {
    throw Error(ErrorCode::kInvariantError, "buggy flag disagrees with review for " + c.id());
  }
}

void check_judgement_invariants(const CaseJudgement& j) {
  if (j.checklist_size < 1) throw Error(ErrorCode::kInvariantError, "checklist_size must be >= 1");
  if (j.covered_count < 0 || j.covered_count > j.checklist_size) {
    throw Error(ErrorCode::kInvariantError, "covered_count outside [0, checklist_size]");
  }
  if (!j.buggy && j.checklist_size != 1) {
    throw Error(ErrorCode::kInvariantError, "bug-free judgement must have checklist_size 1");
  }
}

}  // namespace sphinx

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


#include <gtest/gtest.h>

#include <filesystem>

#include "sphinx/core/error.hpp"
#include "sphinx/core/serialize.hpp"
#include "sphinx/core/types.hpp"
#include "sphinx/core/validation.hpp"

namespace sphinx {
namespace {

PullRequestRecord full_record() {
  PullRequestRecord r;
  r.repo_id = "acme/widgets";
  r.pr_number = 42;
  r.language = Language::kPython;
  r.title = "Fix widget sizing";
  r.description = "Widgets overflow their container.";
  r.linked_issues = {{"7", "Overflow on small screens"}};
  r.gt_diff = "--- a/w.py\n+++ b/w.py\n@@ -1 +1 @@\n-a\n+b\n";
  r.original_code = "a\n";
  r.merged_code = "b\n";
  r.merged = true;
  r.file_count = 1;
  return r;
}

SphinxCase buggy_case() {
  SphinxCase c;
  c.record = full_record();
  c.instruction = {"Widgets overflow.", {{"size()", "Clamp to container width."}}};
  c.pseudo_solution = "c\n";
  c.review = "1. Clamp the width.";
  c.checklist = Checklist::from_items({"Clamp width to the container (prevents overflow)"});
  c.buggy = true;
  c.category = Category::kBugFix;
  return c;
}

SphinxCase clean_case() {
  SphinxCase c = buggy_case();
  c.record.pr_number = 43;
  c.review = std::string(kNoComment);
  c.checklist = Checklist::no_comment();
  c.buggy = false;
  c.category = Category::kUnclassified;
  return c;
}

TEST(ValidateRecord, FullRecordHasNoViolations) { EXPECT_TRUE(validate_record(full_record()).empty()); }

TEST(ValidateRecord, EmptyMergedCode) {
  auto r = full_record();
  r.merged_code.clear();
  EXPECT_EQ(validate_record(r), ValidationReport{Violation::kMissingMergedCode});
}

TEST(ValidateRecord, TwoIndependentViolations) {
  auto r = full_record();
  r.description.clear();
  r.gt_diff.clear();
  const auto report = validate_record(r);
  EXPECT_EQ(report, (ValidationReport{Violation::kMissingDescription, Violation::kMissingDiff}));
  EXPECT_EQ(join_violations(report), "MISSING_DESCRIPTION,MISSING_DIFF");
}

TEST(ValidateRecord, BadNumbers) {
  auto r = full_record();
  r.pr_number = 0;
  r.file_count = 0;
  r.repo_id.clear();
  EXPECT_EQ(validate_record(r), (ValidationReport{Violation::kMissingRepoId, Violation::kInvalidPrNumber,
                                                  Violation::kInvalidFileCount}));
}

TEST(Checklist, NoCommentIsSingleItem) {
  const auto c = Checklist::no_comment();
  EXPECT_TRUE(c.is_no_comment());
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.items()[0], "No comment.");
  EXPECT_TRUE(Checklist::from_items({"No comment."}).is_no_comment());
}

TEST(Checklist, RejectsBadItems) {
  EXPECT_THROW(Checklist::from_items({}), Error);
  EXPECT_THROW(Checklist::from_items({"Fix x", ""}), Error);
  EXPECT_THROW(Checklist::from_items({"Fix x", "No comment."}), Error);
  try {
    Checklist::from_items({});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvariantError);
  }
}

TEST(Language, NamesAndPaths) {
  for (const Language l : kAllLanguages) {
    EXPECT_EQ(language_from_string(to_string(l)), l);
    EXPECT_EQ(language_from_string(file_slug(l)), l);
  }
  EXPECT_EQ(language_from_string("C++"), Language::kCpp);
  EXPECT_EQ(language_from_path("src/a/b.cs"), Language::kCSharp);
  EXPECT_EQ(language_from_path("x.JS"), Language::kJavaScript);
  EXPECT_FALSE(language_from_path("README.md").has_value());
  EXPECT_FALSE(language_from_string("Rust").has_value());
}

TEST(CaseId, RepoHashNumber) { EXPECT_EQ(case_id(full_record()), "acme/widgets#42"); }

TEST(Serialize, CaseRoundTrip) {
  for (const auto& c : {buggy_case(), clean_case()}) {
    const std::string line = serialize_case(c);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    const SphinxCase back = parse_case(line);
    EXPECT_EQ(back, c);
    EXPECT_EQ(serialize_case(back), line);
  }
}

TEST(Serialize, RecordRoundTripWithUnicode) {
  auto r = full_record();
  r.description = "naïve café \xE2\x9C\x93 \"quoted\"\ttab";
  EXPECT_EQ(parse_record(serialize_record(r)), r);
}

TEST(Serialize, EmptyObjectIsParseError) {
  try {
    parse_case("{}");
    FAIL() << "expected PARSE_ERROR";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
}

TEST(Serialize, MalformedJsonCarriesOffset) {
  try {
    parse_case("{\"record\": ");
    FAIL() << "expected PARSE_ERROR";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_GT(e.byte_offset(), 0u);
  }
}

TEST(Serialize, BuggyWithNoCommentReviewIsInvariantError) {
  auto j = to_json(buggy_case());
  j["review"] = "No comment.";
  try {
    parse_case(dump_line(j));
    FAIL() << "expected INVARIANT_ERROR";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvariantError);
  }
}

TEST(Serialize, JudgementInvariants) {
  EXPECT_NO_THROW(check_judgement_invariants({"a#1", 2, 3, true}));
  EXPECT_THROW(check_judgement_invariants({"a#1", 4, 3, true}), Error);
  EXPECT_THROW(check_judgement_invariants({"a#1", -1, 3, true}), Error);
  EXPECT_THROW(check_judgement_invariants({"a#1", 0, 0, true}), Error);
  EXPECT_THROW(check_judgement_invariants({"a#1", 1, 2, false}), Error);
  const CaseJudgement j{"a#1", 1, 3, true};
  EXPECT_EQ(judgement_from_json(to_json(j)), j);
}

TEST(Corpus, DuplicateIdsRejected) {
  const auto dir = std::filesystem::temp_directory_path() / "sphinx_core_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "train.python.jsonl";
  save_cases(path, {buggy_case(), clean_case()});
  EXPECT_EQ(load_cases(path).size(), 2u);
  save_cases(path, {buggy_case(), buggy_case()});
  try {
    load_cases(path);
    FAIL() << "expected DUPLICATE_CASE_ID";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateCaseId);
  }
  std::filesystem::remove_all(dir);
}

TEST(Corpus, BlankLinesAndCrlfSkipped) {
  const auto dir = std::filesystem::temp_directory_path() / "sphinx_core_test_crlf";
  std::filesystem::remove_all(dir);
  write_file(dir / "r.jsonl", serialize_record(full_record()) + "\r\n\r\n");
  const auto records = load_records(dir / "r.jsonl");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0], full_record());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace sphinx

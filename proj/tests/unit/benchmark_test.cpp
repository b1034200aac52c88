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

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "scripted.hpp"
#include "sphinx/bench/benchmark.hpp"
#include "sphinx/core/error.hpp"

namespace sphinx::bench {
namespace {

using testing::Harness;
using testing::PromptKind;

SphinxCase make_case(Language lang, int n, bool buggy, Category category = Category::kBugFix) {
  SphinxCase c;
  c.record.repo_id = "corpus/" + std::string(file_slug(lang));
  c.record.pr_number = n;
  c.record.language = lang;
  c.record.title = "PR " + std::to_string(n);
  c.record.description = "d";
  c.record.gt_diff = "diff";
  c.record.original_code = "a";
  c.record.merged_code = "b";
  c.record.merged = true;
  c.instruction = {"p", {{"t", "l"}}};
  c.pseudo_solution = "c";
  if (buggy) {
    c.review = "1. Fix it";
    c.checklist = Checklist::from_items({"Fix it"});
    c.buggy = true;
    c.category = category;
  } else {
    c.review = std::string(kNoComment);
  }
  return c;
}

std::vector<SphinxCase> corpus(std::int64_t buggy, std::int64_t clean) {
  std::vector<SphinxCase> out;
  for (Language lang : kAllLanguages) {
    int n = 1;
    for (std::int64_t i = 0; i < buggy; ++i) out.push_back(make_case(lang, n++, true));
    for (std::int64_t i = 0; i < clean; ++i) out.push_back(make_case(lang, n++, false));
  }
  return out;
}

std::vector<std::string> ids(const std::vector<SphinxCase>& cases) {
  std::vector<std::string> out;
  for (const auto& c : cases) out.push_back(c.id());
  return out;
}

TEST(CategoryVerdict, Parsing) {
  EXPECT_EQ(parse_category_verdict("Bug Fix"), Category::kBugFix);
  EXPECT_EQ(parse_category_verdict("**Refactor / Maintenance**"), Category::kRefactorMaintenance);
  EXPECT_EQ(parse_category_verdict("Category: Feature / Improvement\nbecause..."), Category::kFeatureImprovement);
  EXPECT_EQ(parse_category_verdict("other"), Category::kOther);
  EXPECT_FALSE(parse_category_verdict("banana").has_value());
  EXPECT_FALSE(parse_category_verdict("").has_value());
}

TEST(ClassifyCase, VerdictsAndFallback) {
  {
    Harness h;
    h.provider->reply(PromptKind::kClassify, "Bug Fix");
    EXPECT_EQ(classify_case(make_case(Language::kJava, 1, true), h.runner).category, Category::kBugFix);
  }
  {
    Harness h;
    h.provider->reply(PromptKind::kClassify, "asdf qwerty");
    const auto c = classify_case(make_case(Language::kJava, 1, true), h.runner);
    EXPECT_EQ(c.category, Category::kOther);
    EXPECT_TRUE(c.fallback);
  }
  Harness h;
  EXPECT_THROW(classify_case(make_case(Language::kJava, 1, false), h.runner), Error);
}

// Hand-labelled fixture: the title and diff describe a crash fix, which the
// category definitions place under Bug Fix.
TEST(ClassifyCase, NpeFixtureIsBugFix) {
  auto c = make_case(Language::kJava, 7, true, Category::kUnclassified);
  c.record.title = "fixes NPE in parser";
  c.record.gt_diff = "-    return node.value;\n+    return node == null ? null : node.value;\n";
  Harness h;
  h.provider->add([](PromptKind k, const llm::CompletionRequest& r) -> std::optional<std::string> {
    if (k != PromptKind::kClassify) return std::nullopt;
    EXPECT_NE(r.prompt.find("fixes NPE in parser"), std::string::npos);
    EXPECT_NE(r.prompt.find("node == null"), std::string::npos);
    return "Bug Fix";
  });
  EXPECT_EQ(classify_case(c, h.runner).category, Category::kBugFix);
}

TEST(ClassifyCorpus, SkipsBugFreeAndCounts) {
  Harness h;
  h.provider->add([](PromptKind k, const llm::CompletionRequest& r) -> std::optional<std::string> {
    if (k != PromptKind::kClassify) return std::nullopt;
    return r.prompt.find("PR 2\n") != std::string::npos || r.prompt.find("PR 2\r") != std::string::npos ? "???"
                                                                                                         : "Refactor";
  });
  std::vector<SphinxCase> cases = {make_case(Language::kJava, 1, true, Category::kUnclassified),
                                   make_case(Language::kJava, 2, true, Category::kUnclassified),
                                   make_case(Language::kJava, 3, false)};
  const auto report = classify_corpus(cases, h.runner, 2);
  EXPECT_EQ(report.classified, 2u);
  EXPECT_EQ(h.provider->count(PromptKind::kClassify), 2u);
  EXPECT_EQ(report.fallbacks, 1u);
  EXPECT_EQ(cases[0].category, Category::kRefactorMaintenance);
  EXPECT_EQ(cases[1].category, Category::kOther);
  EXPECT_EQ(cases[2].category, Category::kUnclassified);
}

TEST(SampleBenchmark, FullScaleQuotas) {
  const auto all = corpus(1000, 100);
  const auto bench = sample_benchmark(all, {});
  EXPECT_EQ(bench.size(), 2500u);
  const auto stats = benchmark_stats(bench);
  for (Language lang : kAllLanguages) {
    EXPECT_EQ(stats.languages.at(lang).buggy, 450);
    EXPECT_EQ(stats.languages.at(lang).bug_free, 50);
    EXPECT_EQ(stats.languages.at(lang).total, 500);
  }
  EXPECT_TRUE(std::is_sorted(bench.begin(), bench.end(),
                             [](const SphinxCase& a, const SphinxCase& b) { return a.id() < b.id(); }));
  const auto id_list = ids(bench);
  EXPECT_EQ(std::set<std::string>(id_list.begin(), id_list.end()).size(), 2500u);
}

TEST(SampleBenchmark, SeededAndPermutationInvariant) {
  auto all = corpus(60, 12);
  BenchmarkSpec spec{20, 15, 5, 1234, {kAllLanguages.begin(), kAllLanguages.end()}};
  const auto a = ids(sample_benchmark(all, spec));
  EXPECT_EQ(a, ids(sample_benchmark(all, spec)));
  std::mt19937_64 rng(99);
  std::shuffle(all.begin(), all.end(), rng);
  EXPECT_EQ(a, ids(sample_benchmark(all, spec)));
  spec.seed = 1235;
  EXPECT_NE(a, ids(sample_benchmark(all, spec)));
}

TEST(SampleBenchmark, LanguageSubset) {
  const auto all = corpus(10, 3);
  const auto bench = sample_benchmark(all, {6, 4, 2, 0, {Language::kCpp}});
  ASSERT_EQ(bench.size(), 6u);
  for (const auto& c : bench) EXPECT_EQ(c.record.language, Language::kCpp);
}

TEST(SampleBenchmark, Errors) {
  auto all = corpus(1000, 100);
  std::vector<SphinxCase> kept;
  int dropped = 0;
  for (auto& c : all) {
    if (c.record.language == Language::kPython && c.buggy && dropped < 551) {
      ++dropped;
      continue;
    }
    kept.push_back(std::move(c));
  }
  all = std::move(kept);
  try {
    sample_benchmark(all, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientCases);
    EXPECT_NE(std::string(e.what()).find("449"), std::string::npos);
  }
  auto dup = corpus(3, 1);
  dup.push_back(dup.front());
  try {
    sample_benchmark(dup, {4, 3, 1, 0, {Language::kJava}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateCaseId);
  }
  EXPECT_THROW(sample_benchmark(corpus(3, 1), {5, 3, 1, 0, {Language::kJava}}), Error);
}

TEST(BoundedRandom, InRangeAndCoversRange) {
  std::mt19937_64 rng(5);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = bounded_random(rng, 7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
  const auto idx = sample_indices(10, 10, rng);
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 10u);
}

// Per-language category counts of the released benchmark.
const std::map<Language, std::array<int, 4>> kReleased = {
    {Language::kJava, {394, 25, 21, 10}},   {Language::kCpp, {427, 13, 0, 10}},
    {Language::kCSharp, {402, 24, 10, 14}}, {Language::kPython, {370, 25, 39, 16}},
    {Language::kJavaScript, {388, 28, 22, 12}}};

std::vector<SphinxCase> released_fixture() {
  std::vector<SphinxCase> out;
  for (const auto& [lang, counts] : kReleased) {
    int n = 1;
    for (std::size_t c = 0; c < 4; ++c) {
      for (int i = 0; i < counts[c]; ++i) out.push_back(make_case(lang, n++, true, kBuggyCategories[c]));
    }
    for (int i = 0; i < 50; ++i) out.push_back(make_case(lang, n++, false));
  }
  return out;
}

TEST(BenchmarkStats, ReleasedBreakdown) {
  const auto stats = benchmark_stats(released_fixture());
  const auto& java = stats.languages.at(Language::kJava);
  EXPECT_EQ(java.by_category.at(Category::kBugFix), 394);
  EXPECT_EQ(java.by_category.at(Category::kFeatureImprovement), 25);
  EXPECT_EQ(java.by_category.at(Category::kRefactorMaintenance), 21);
  EXPECT_EQ(java.by_category.at(Category::kOther), 10);
  EXPECT_EQ(java.bug_free, 50);
  const auto& cpp = stats.languages.at(Language::kCpp);
  EXPECT_EQ(cpp.by_category.count(Category::kRefactorMaintenance) ? cpp.by_category.at(Category::kRefactorMaintenance) : 0, 0);
  EXPECT_EQ(stats.total(), 2500);
  EXPECT_EQ(stats.category_total(Category::kBugFix), 1981);
  EXPECT_EQ(stats.category_total(Category::kFeatureImprovement), 115);
  EXPECT_EQ(stats.category_total(Category::kRefactorMaintenance), 92);
  EXPECT_EQ(stats.category_total(Category::kOther), 62);
  for (const auto& [lang, s] : stats.languages) {
    std::int64_t sum = s.bug_free;
    for (const auto& [cat, n] : s.by_category) sum += n;
    EXPECT_EQ(sum, s.total);
    EXPECT_EQ(s.total, 500);
  }
  const std::string table = format_stats_table(stats);
  EXPECT_NE(table.find("Java: 500 total (50 bug-free, 450 buggy)\n  Bug Fix: 394 samples\n"), std::string::npos);
  EXPECT_NE(table.find("  Refactor / Maintenance: 0 samples"), std::string::npos);
  EXPECT_LT(table.find("Java:"), table.find("C++:"));
  EXPECT_LT(table.find("C++:"), table.find("C#:"));
  EXPECT_LT(table.find("Python:"), table.find("JavaScript:"));
}

TEST(BenchmarkStats, EmptyIsAllZero) {
  const auto stats = benchmark_stats({});
  EXPECT_EQ(stats.languages.size(), 5u);
  for (const auto& [lang, s] : stats.languages) {
    EXPECT_EQ(s.total, 0);
    EXPECT_EQ(s.buggy, 0);
    EXPECT_EQ(s.bug_free, 0);
    EXPECT_EQ(s.by_category.size(), 4u);
    for (const auto& [cat, n] : s.by_category) EXPECT_EQ(n, 0);
  }
  EXPECT_EQ(stats.total(), 0);
}

}  // namespace
}  // namespace sphinx::bench

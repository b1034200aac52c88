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
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphinx/core/types.hpp"
#include "sphinx/llm/prompt_runner.hpp"

namespace sphinx::bench {

/// Display label used by the classification prompt and the stats table,
/// e.g. "Feature / Improvement".
std::string_view category_label(Category category);

/// Category named on the first line of a verdict, ignoring case, markdown
/// emphasis and trailing punctuation. nullopt when none matches.
std::optional<Category> parse_category_verdict(std::string_view text);

struct Classification {
  Category category = Category::kOther;
  bool fallback = false;  // verdict unparseable, defaulted to Other
  std::string raw;
};

/// Buggy cases only (INVARIANT_ERROR otherwise). Provider errors propagate.
Classification classify_case(const SphinxCase& sphinx_case, llm::PromptRunner& runner);

struct ClassifyReport {
  std::size_t classified = 0;
  std::size_t fallbacks = 0;
  std::vector<std::pair<std::string, std::string>> errors;  // case_id, message
};

/// Sets the category of every buggy case in place; bug-free cases stay
/// Unclassified. Runs in parallel over cases.
ClassifyReport classify_corpus(std::vector<SphinxCase>& cases, llm::PromptRunner& runner, int jobs = 0);

struct BenchmarkSpec {
  std::int64_t per_language_total = 500;
  std::int64_t buggy_quota = 450;
  std::int64_t bugfree_quota = 50;
  std::uint64_t seed = 0;
  std::set<Language> languages{kAllLanguages.begin(), kAllLanguages.end()};

  /// INVALID_CONFIG unless the quotas are non-negative and sum to the total.
  void validate() const;
};

/// Uniform integer in [0, bound) from a 64-bit engine, by multiply-shift with
/// rejection. Identical across platforms for a given engine state.
std::uint64_t bounded_random(std::mt19937_64& engine, std::uint64_t bound);

/// Uniform sample of `k` of `n` indices (partial Fisher-Yates), in draw order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::mt19937_64& engine);

/// Per language, draws buggy_quota buggy and bugfree_quota bug-free cases
/// without replacement. The result depends only on the set of cases and the
/// seed, and is sorted by case_id. Throws INSUFFICIENT_CASES or
/// DUPLICATE_CASE_ID.
std::vector<SphinxCase> sample_benchmark(std::span<const SphinxCase> corpus, const BenchmarkSpec& spec);

struct LanguageStats {
  std::int64_t total = 0;
  std::int64_t buggy = 0;
  std::int64_t bug_free = 0;
  std::map<Category, std::int64_t> by_category;  // buggy cases only

  friend bool operator==(const LanguageStats&, const LanguageStats&) = default;
};

struct BenchmarkStats {
  std::map<Language, LanguageStats> languages;  // always holds all five

  std::int64_t total() const;
  std::int64_t category_total(Category category) const;
  friend bool operator==(const BenchmarkStats&, const BenchmarkStats&) = default;
};

BenchmarkStats benchmark_stats(std::span<const SphinxCase> benchmark);

nlohmann::json to_json(const BenchmarkStats& stats);

/// Per-language breakdown in the layout of the published statistics table.
std::string format_stats_table(const BenchmarkStats& stats);

}  // namespace sphinx::bench

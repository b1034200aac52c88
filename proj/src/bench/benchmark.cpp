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


#include "sphinx/bench/benchmark.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <spdlog/spdlog.h>

#include "sphinx/core/error.hpp"
#include "sphinx/core/text.hpp"
#include "sphinx/util/parallel.hpp"

namespace sphinx::bench {
namespace {

constexpr std::array<Category, 4> kBuggyOrder = {Category::kBugFix, Category::kFeatureImprovement,
                                                 Category::kRefactorMaintenance, Category::kOther};

// Row order of the published per-language breakdown.
constexpr std::array<Language, 5> kTableOrder = {Language::kJava, Language::kCpp, Language::kCSharp,
                                                 Language::kPython, Language::kJavaScript};

std::string_view display_name(Language language) {
  switch (language) {
    case Language::kCpp: return "C++";
    case Language::kCSharp: return "C#";
    default: return to_string(language);
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Letters and digits only, lowercased: "**Feature / Improvement.**" -> "featureimprovement".
std::string squash(std::string_view text) {
  std::string out;
  for (const unsigned char ch : text) {
    if (std::isalnum(ch)) out.push_back(static_cast<char>(std::tolower(ch)));
  }
  return out;
}

}  // namespace

std::string_view category_label(Category category) {
  switch (category) {
    case Category::kBugFix: return "Bug Fix";
    case Category::kFeatureImprovement: return "Feature / Improvement";
    case Category::kRefactorMaintenance: return "Refactor / Maintenance";
    case Category::kOther: return "Other";
    case Category::kUnclassified: return "Unclassified";
  }
  return "Unclassified";
}

std::optional<Category> parse_category_verdict(std::string_view text) {
  std::string_view line = trim_view(text);
  if (const auto nl = line.find('\n'); nl != std::string_view::npos) line = line.substr(0, nl);
  std::string key = squash(line);
  if (key.starts_with("category")) key = key.substr(8);
  struct Alias {
    std::string_view key;
    Category category;
  };
  static constexpr std::array<Alias, 9> kAliases = {{
      {"bugfix", Category::kBugFix},
      {"featureimprovement", Category::kFeatureImprovement},
      {"feature", Category::kFeatureImprovement},
      {"improvement", Category::kFeatureImprovement},
      {"refactormaintenance", Category::kRefactorMaintenance},
      {"refactor", Category::kRefactorMaintenance},
      {"maintenance", Category::kRefactorMaintenance},
      {"other", Category::kOther},
      {"others", Category::kOther},
  }};
  for (const auto& a : kAliases) {
    if (key == a.key) return a.category;
  }
  return std::nullopt;
}

Classification classify_case(const SphinxCase& sphinx_case, llm::PromptRunner& runner) {
  if (!sphinx_case.buggy) {
    throw Error(ErrorCode::kInvariantError, sphinx_case.id() + ": bug-free cases are not classified");
  }
  const llm::Bindings bindings = {{"pr_metadata", pr_metadata_text(sphinx_case.record)},
                                  {"gt_code_diff", sphinx_case.record.gt_diff}};
  const auto c = runner.run(llm::kClassifyCategory, bindings, runner.models().classifier);
  Classification out;
  out.raw = c.text;
  if (const auto cat = parse_category_verdict(c.text)) {
    out.category = *cat;
  } else {
    out.fallback = true;
    spdlog::warn("unparseable category verdict for {}: '{}', using Other", sphinx_case.id(),
                 trim(c.text).substr(0, 60));
  }
  return out;
}

ClassifyReport classify_corpus(std::vector<SphinxCase>& cases, llm::PromptRunner& runner, int jobs) {
  std::vector<std::optional<Classification>> results(cases.size());
  std::vector<std::string> errors(cases.size());
  parallel_for(cases.size(), jobs, [&](std::size_t i) {
    if (!cases[i].buggy) return;
    try {
      results[i] = classify_case(cases[i], runner);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  ClassifyReport report;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!cases[i].buggy) {
      cases[i].category = Category::kUnclassified;
      continue;
    }
    if (!errors[i].empty()) {
      report.errors.emplace_back(cases[i].id(), errors[i]);
      continue;
    }
    cases[i].category = results[i]->category;
    ++report.classified;
    if (results[i]->fallback) ++report.fallbacks;
  }
  return report;
}

void BenchmarkSpec::validate() const {
  if (buggy_quota < 0 || bugfree_quota < 0 || per_language_total <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "quotas must be non-negative and the total positive");
  }
  if (buggy_quota + bugfree_quota != per_language_total) {
    throw Error(ErrorCode::kInvalidConfig, "buggy_quota + bugfree_quota must equal per_language_total");
  }
  if (languages.empty()) throw Error(ErrorCode::kInvalidConfig, "no languages selected");
}

std::uint64_t bounded_random(std::mt19937_64& engine, std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidConfig, "bounded_random with bound 0");
  unsigned __int128 m = static_cast<unsigned __int128>(engine()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::mt19937_64& engine) {
  if (k > n) throw Error(ErrorCode::kInvalidConfig, "cannot sample more than the population");
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded_random(engine, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

std::vector<SphinxCase> sample_benchmark(std::span<const SphinxCase> corpus, const BenchmarkSpec& spec) {
  spec.validate();
  std::vector<const SphinxCase*> sorted;
  sorted.reserve(corpus.size());
  for (const auto& c : corpus) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](const SphinxCase* a, const SphinxCase* b) { return a->id() < b->id(); });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->id() == sorted[i - 1]->id()) {
      throw Error(ErrorCode::kDuplicateCaseId, sorted[i]->id());
    }
  }

  std::vector<SphinxCase> out;
  for (const Language lang : spec.languages) {
    std::vector<const SphinxCase*> buggy;
    std::vector<const SphinxCase*> clean;
    for (const auto* c : sorted) {
      if (c->record.language != lang) continue;
      (c->buggy ? buggy : clean).push_back(c);
    }
    const auto need = [&](std::int64_t quota, std::size_t have, std::string_view kind) {
      if (static_cast<std::int64_t>(have) < quota) {
        throw Error(ErrorCode::kInsufficientCases,
                    std::string(to_string(lang)) + ": need " + std::to_string(quota) + " " +
                        std::string(kind) + ", have " + std::to_string(have));
      }
    };
    need(spec.buggy_quota, buggy.size(), "buggy");
    need(spec.bugfree_quota, clean.size(), "bug-free");

    std::mt19937_64 engine(splitmix64(spec.seed ^ splitmix64(static_cast<std::uint64_t>(lang) + 1)));
    for (const auto i : sample_indices(buggy.size(), static_cast<std::size_t>(spec.buggy_quota), engine)) {
      out.push_back(*buggy[i]);
    }
    for (const auto i : sample_indices(clean.size(), static_cast<std::size_t>(spec.bugfree_quota), engine)) {
      out.push_back(*clean[i]);
    }
  }
  std::sort(out.begin(), out.end(), [](const SphinxCase& a, const SphinxCase& b) { return a.id() < b.id(); });
  return out;
}

std::int64_t BenchmarkStats::total() const {
  std::int64_t n = 0;
  for (const auto& [lang, s] : languages) n += s.total;
  return n;
}

std::int64_t BenchmarkStats::category_total(Category category) const {
  std::int64_t n = 0;
  for (const auto& [lang, s] : languages) {
    if (const auto it = s.by_category.find(category); it != s.by_category.end()) n += it->second;
  }
  return n;
}

BenchmarkStats benchmark_stats(std::span<const SphinxCase> benchmark) {
  BenchmarkStats stats;
  for (const Language lang : kAllLanguages) {
    auto& s = stats.languages[lang];
    for (const Category c : kBuggyOrder) s.by_category[c] = 0;
  }
  for (const auto& c : benchmark) {
    auto& s = stats.languages[c.record.language];
    ++s.total;
    if (c.buggy) {
      ++s.buggy;
      ++s.by_category[c.category];
    } else {
      ++s.bug_free;
    }
  }
  return stats;
}

nlohmann::json to_json(const BenchmarkStats& stats) {
  nlohmann::json langs = nlohmann::json::object();
  for (const auto& [lang, s] : stats.languages) {
    nlohmann::json cats = nlohmann::json::object();
    for (const auto& [cat, n] : s.by_category) cats[std::string(to_string(cat))] = n;
    langs[std::string(to_string(lang))] = {
        {"total", s.total}, {"buggy", s.buggy}, {"bug_free", s.bug_free}, {"categories", std::move(cats)}};
  }
  return {{"total", stats.total()}, {"languages", std::move(langs)}};
}

std::string format_stats_table(const BenchmarkStats& stats) {
  std::ostringstream out;
  for (const Language lang : kTableOrder) {
    const auto it = stats.languages.find(lang);
    if (it == stats.languages.end()) continue;
    const auto& s = it->second;
    out << display_name(lang) << ": " << s.total << " total (" << s.bug_free << " bug-free, " << s.buggy
        << " buggy)\n";
    for (const Category c : kBuggyOrder) {
      const auto n = s.by_category.count(c) ? s.by_category.at(c) : 0;
      out << "  " << category_label(c) << ": " << n << " samples\n";
    }
    if (const auto u = s.by_category.find(Category::kUnclassified);
        u != s.by_category.end() && u->second > 0) {
      out << "  Unclassified: " << u->second << " samples\n";
    }
  }
  std::int64_t bug_free = 0;
  for (const auto& [lang, s] : stats.languages) bug_free += s.bug_free;
  out << "Total: " << stats.total() << " (";
  for (const Category c : kBuggyOrder) out << category_label(c) << " " << stats.category_total(c) << ", ";
  out << "bug-free " << bug_free << ")\n";
  return out.str();
}

}  // namespace sphinx::bench

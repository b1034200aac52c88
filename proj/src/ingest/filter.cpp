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

#include "sphinx/ingest/filter.hpp"

#include <spdlog/spdlog.h>

#include "sphinx/core/error.hpp"
#include "sphinx/core/validation.hpp"
#include "sphinx/util/parallel.hpp"

namespace sphinx::ingest {
namespace {

FilterDecision keep(const PullRequestRecord& r, FilterStage stage) {
  return {case_id(r), stage, true, ""};
}

FilterDecision drop(const PullRequestRecord& r, FilterStage stage, std::string reason) {
  return {case_id(r), stage, false, std::move(reason)};
}

std::string safety_content(const PullRequestRecord& r) {
  std::string out = "Title: " + r.title + "\n\nDescription:\n" + r.description + "\n";
  for (const auto& issue : r.linked_issues) {
    out += "\nLinked issue #" + issue.id + ":\n" + issue.body + "\n";
  }
  out += "\nDiff:\n" + r.gt_diff;
  return out;
}

struct RecordOutcome {
  std::vector<FilterDecision> decisions;
  bool kept = false;
  std::optional<std::string> error;
};

RecordOutcome screen(const PullRequestRecord& record, const IngestSpec& spec,
                     llm::PromptRunner& runner) {
  RecordOutcome out;
  const TokenEstimator estimator(spec.token_strategy);
  out.decisions.push_back(filter_completeness(record));
  if (!out.decisions.back().kept) return out;
  out.decisions.push_back(filter_merged(record));
  if (!out.decisions.back().kept) return out;
  out.decisions.push_back(filter_length(record, spec.token_limit, estimator));
  if (!out.decisions.back().kept) return out;
  try {
    out.decisions.push_back(filter_safety(record, runner));
  } catch (const Error& e) {
    spdlog::error("safety screen failed for {}: {}", case_id(record), e.what());
    out.error = e.what();
    return out;
  }
  out.kept = out.decisions.back().kept;
  return out;
}

FilterResult collect(std::span<const PullRequestRecord> records, std::vector<RecordOutcome> outcomes) {
  FilterResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& o = outcomes[i];
    for (auto& d : o.decisions) result.decisions.push_back(std::move(d));
    if (o.error) result.errors.push_back({case_id(records[i]), *o.error});
    if (o.kept) result.kept.push_back(records[i]);
  }
  return result;
}

}  // namespace

std::string_view to_string(FilterStage stage) {
  switch (stage) {
    case FilterStage::kCompleteness: return "Completeness";
    case FilterStage::kMerged: return "Merged";
    case FilterStage::kLength: return "Length";
    case FilterStage::kSafety: return "Safety";
  }
  return "Completeness";
}

nlohmann::json to_json(const FilterDecision& d) {
  return {{"case_id", d.case_id},
          {"stage", std::string(to_string(d.stage))},
          {"kept", d.kept},
          {"reason", d.reason}};
}

void IngestSpec::validate() const {
  if (token_limit <= 0) throw Error(ErrorCode::kInvalidConfig, "token_limit must be positive");
  if (max_prs <= 0) throw Error(ErrorCode::kInvalidConfig, "max_prs must be positive");
  if (languages.empty()) throw Error(ErrorCode::kInvalidConfig, "no languages selected");
}

FilterDecision filter_completeness(const PullRequestRecord& record) {
  const auto report = validate_record(record);
  if (report.empty()) return keep(record, FilterStage::kCompleteness);
  return drop(record, FilterStage::kCompleteness, join_violations(report));
}

FilterDecision filter_merged(const PullRequestRecord& record) {
  if (record.merged) return keep(record, FilterStage::kMerged);
  return drop(record, FilterStage::kMerged, "not merged");
}

std::size_t length_budget_tokens(const PullRequestRecord& record, const TokenEstimator& estimator) {
  std::string bundle = record.description;
  for (const auto& issue : record.linked_issues) bundle += issue.body;
  bundle += record.original_code;
  return estimator(bundle);
}

FilterDecision filter_length(const PullRequestRecord& record, std::int64_t token_limit,
                             const TokenEstimator& estimator) {
  if (record.file_count != 1) return drop(record, FilterStage::kLength, "multi-file");
  const auto tokens = static_cast<std::int64_t>(length_budget_tokens(record, estimator));
  if (tokens > token_limit) {
    return drop(record, FilterStage::kLength,
                "too long: " + std::to_string(tokens) + " > " + std::to_string(token_limit) + " tokens");
  }
  return keep(record, FilterStage::kLength);
}

std::optional<SafetyVerdict> parse_safety_verdict(std::string_view text) {
  std::string_view t = trim_view(text);
  if (const auto nl = t.find('\n'); nl != std::string_view::npos) t = trim_view(t.substr(0, nl));
  while (!t.empty() && (t.front() == '*' || t.front() == '"' || t.front() == '`')) t.remove_prefix(1);
  while (!t.empty() && (t.back() == '*' || t.back() == '"' || t.back() == '`' || t.back() == '.')) {
    t.remove_suffix(1);
  }
  if (t.size() == 4 && starts_with_icase(t, "SAFE")) return SafetyVerdict{true, ""};
  if (starts_with_icase(t, "UNSAFE")) {
    std::string_view rest = t.substr(6);
    if (!rest.empty() && rest.front() != ':' && rest.front() != ' ' && rest.front() != '-') {
      return std::nullopt;
    }
    while (!rest.empty() && (rest.front() == ':' || rest.front() == ' ' || rest.front() == '-')) {
      rest.remove_prefix(1);
    }
    return SafetyVerdict{false, rest.empty() ? "unsafe" : "unsafe: " + std::string(rest)};
  }
  return std::nullopt;
}

FilterDecision filter_safety(const PullRequestRecord& record, llm::PromptRunner& runner) {
  const auto completion =
      runner.run(llm::kSafetyScreen, {{"pr_content", safety_content(record)}}, runner.models().safety);
  const auto verdict = parse_safety_verdict(completion.text);
  if (!verdict) return drop(record, FilterStage::kSafety, "safety-unparseable");
  if (verdict->safe) return keep(record, FilterStage::kSafety);
  return drop(record, FilterStage::kSafety, verdict->reason);
}

FilterResult run_filter_pipeline(std::span<const PullRequestRecord> records, const IngestSpec& spec,
                                 llm::PromptRunner& runner, int jobs) {
  spec.validate();
  std::vector<RecordOutcome> outcomes(records.size());
  parallel_for(records.size(), jobs,
               [&](std::size_t i) { outcomes[i] = screen(records[i], spec, runner); });
  return collect(records, std::move(outcomes));
}

FilterResult run_filter_pipeline_serial(std::span<const PullRequestRecord> records,
                                        const IngestSpec& spec, llm::PromptRunner& runner) {
  spec.validate();
  std::vector<RecordOutcome> outcomes;
  outcomes.reserve(records.size());
  for (const auto& r : records) outcomes.push_back(screen(r, spec, runner));
  return collect(records, std::move(outcomes));
}

}  // namespace sphinx::ingest

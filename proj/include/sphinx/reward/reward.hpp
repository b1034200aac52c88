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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphinx/core/types.hpp"
#include "sphinx/llm/prompt_runner.hpp"
#include "sphinx/reward/penalty.hpp"

namespace sphinx::reward {

struct RewardBreakdown {
  double coverage = 0.0;  // S / N
  double gamma = 1.0;
  double reward = 0.0;    // gamma * coverage, nothing else
  std::int64_t pred_len = 0;
  std::int64_t ref_len = 1;
  std::int64_t judged_count = 0;
  std::int64_t checklist_size = 1;
  bool clamped = false;
  /// JUDGE_UNPARSEABLE, PROVIDER_ERROR, ... The reward is 0 when set.
  std::optional<std::string> error;

  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) = default;
};

struct RewardRequest {
  std::string context;
  std::string review;
  Checklist checklist = Checklist::no_comment();
  std::optional<LengthMode> length_mode;  // overrides the config when set
};

/// pred_len of a review: item count or estimated tokens.
std::int64_t predicted_length(std::string_view review, LengthMode mode);
/// ref_len of a checklist: item count or summed item tokens (at least 1).
std::int64_t reference_length(const Checklist& checklist, LengthMode mode);

/// Pure composition: reward = gamma(pred_len, ref_len) * judged / size.
RewardBreakdown compose_reward(std::int64_t pred_len, std::int64_t ref_len, std::int64_t judged_count,
                               std::int64_t checklist_size, const PenaltyConfig& cfg);

/// Checklist-scalar reward with the length penalty. Judge failures and
/// provider errors never throw: they yield reward 0 and set `error`.
/// `context` is carried for the trainer's bookkeeping; the judge prompt sees
/// only the checklist and the review.
RewardBreakdown crpo_reward(const RewardRequest& request, const PenaltyConfig& cfg,
                            llm::PromptRunner& runner, const std::string& judge_model);

/// Element i answers request i.
std::vector<RewardBreakdown> batch_reward(std::span<const RewardRequest> requests,
                                          const PenaltyConfig& cfg, llm::PromptRunner& runner,
                                          const std::string& judge_model, int jobs = 0);

std::vector<RewardBreakdown> batch_reward_serial(std::span<const RewardRequest> requests,
                                                 const PenaltyConfig& cfg,
                                                 llm::PromptRunner& runner,
                                                 const std::string& judge_model);

nlohmann::json to_json(const RewardBreakdown& b);
RewardBreakdown breakdown_from_json(const nlohmann::json& j);

/// Wire request: {context, review, checklist: [strings] | "NO_COMMENT",
/// length_mode?}. Throws ParseError or INVARIANT_ERROR on schema violations.
RewardRequest request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RewardRequest& r);

}  // namespace sphinx::reward

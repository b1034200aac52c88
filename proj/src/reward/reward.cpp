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

#include "sphinx/reward/reward.hpp"

#include <spdlog/spdlog.h>

#include "sphinx/core/error.hpp"
#include "sphinx/core/text.hpp"
#include "sphinx/eval/coverage.hpp"
#include "sphinx/util/parallel.hpp"

namespace sphinx::reward {
namespace {

using json = nlohmann::json;

}  // namespace

std::int64_t predicted_length(std::string_view review, LengthMode mode) {
  if (mode == LengthMode::kTokens) return static_cast<std::int64_t>(estimate_tokens(review));
  return static_cast<std::int64_t>(segment_items(review).size());
}

std::int64_t reference_length(const Checklist& checklist, LengthMode mode) {
  if (mode == LengthMode::kItems) return static_cast<std::int64_t>(checklist.size());
  std::int64_t total = 0;
  for (const auto& item : checklist.items()) total += static_cast<std::int64_t>(estimate_tokens(item));
  return std::max<std::int64_t>(1, total);
}

RewardBreakdown compose_reward(std::int64_t pred_len, std::int64_t ref_len, std::int64_t judged_count,
                               std::int64_t checklist_size, const PenaltyConfig& cfg) {
  if (checklist_size < 1) throw Error(ErrorCode::kInvalidConfig, "checklist_size must be >= 1");
  RewardBreakdown b;
  b.pred_len = pred_len;
  b.ref_len = ref_len;
  b.checklist_size = checklist_size;
  b.judged_count = std::clamp<std::int64_t>(judged_count, 0, checklist_size);
  b.clamped = b.judged_count != judged_count;
  b.gamma = length_penalty(pred_len, ref_len, cfg);
  b.coverage = static_cast<double>(b.judged_count) / static_cast<double>(checklist_size);
  b.reward = b.gamma * b.coverage;
  return b;
}

RewardBreakdown crpo_reward(const RewardRequest& request, const PenaltyConfig& cfg,
                            llm::PromptRunner& runner, const std::string& judge_model) {
  const LengthMode mode = request.length_mode.value_or(cfg.length_mode);
  const std::int64_t pred_len = predicted_length(request.review, mode);
  const std::int64_t ref_len = reference_length(request.checklist, mode);
  const auto size = static_cast<std::int64_t>(request.checklist.size());

  RewardBreakdown b = compose_reward(pred_len, ref_len, 0, size, cfg);
  try {
    const auto verdict = eval::judge_coverage(request.review, request.checklist, runner, judge_model);
    if (verdict.unparseable) {
      b.error = std::string(to_string(ErrorCode::kJudgeUnparseable));
      return b;
    }
    b = compose_reward(pred_len, ref_len, verdict.judgement.covered_count, size, cfg);
    b.clamped = verdict.clamped;
  } catch (const Error& e) {
    spdlog::warn("reward judge call failed: {}", e.what());
    b.error = std::string(to_string(e.code()));
    b.judged_count = 0;
    b.coverage = 0.0;
    b.reward = 0.0;
  }
  return b;
}

std::vector<RewardBreakdown> batch_reward(std::span<const RewardRequest> requests,
                                          const PenaltyConfig& cfg, llm::PromptRunner& runner,
                                          const std::string& judge_model, int jobs) {
  cfg.validate();
  std::vector<RewardBreakdown> out(requests.size());
  parallel_for(requests.size(), jobs, [&](std::size_t i) {
    out[i] = crpo_reward(requests[i], cfg, runner, judge_model);
  });
  return out;
}

std::vector<RewardBreakdown> batch_reward_serial(std::span<const RewardRequest> requests,
                                                 const PenaltyConfig& cfg,
                                                 llm::PromptRunner& runner,
                                                 const std::string& judge_model) {
  cfg.validate();
  std::vector<RewardBreakdown> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(crpo_reward(r, cfg, runner, judge_model));
  return out;
}

json to_json(const RewardBreakdown& b) {
  return {{"coverage", b.coverage},
          {"gamma", b.gamma},
          {"reward", b.reward},
          {"pred_len", b.pred_len},
          {"ref_len", b.ref_len},
          {"judged_count", b.judged_count},
          {"checklist_size", b.checklist_size},
          {"clamped", b.clamped},
          {"error", b.error ? json(*b.error) : json(nullptr)}};
}

RewardBreakdown breakdown_from_json(const json& j) {
  RewardBreakdown b;
  b.coverage = j.at("coverage").get<double>();
  b.gamma = j.at("gamma").get<double>();
  b.reward = j.at("reward").get<double>();
  b.pred_len = j.at("pred_len").get<std::int64_t>();
  b.ref_len = j.at("ref_len").get<std::int64_t>();
  b.judged_count = j.at("judged_count").get<std::int64_t>();
  b.checklist_size = j.at("checklist_size").get<std::int64_t>();
  b.clamped = j.value("clamped", false);
  if (auto it = j.find("error"); it != j.end() && it->is_string()) b.error = it->get<std::string>();
  return b;
}

RewardRequest request_from_json(const json& j) {
  if (!j.is_object()) throw ParseError(0, "request must be a JSON object");
  RewardRequest r;
  for (const char* key : {"context", "review"}) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      throw ParseError(0, std::string("'") + key + "' must be a string");
    }
  }
  r.context = j.at("context").get<std::string>();
  r.review = j.at("review").get<std::string>();

  const auto cl = j.find("checklist");
  if (cl == j.end()) throw ParseError(0, "missing 'checklist'");
  if (cl->is_string()) {
    if (cl->get<std::string>() != "NO_COMMENT") {
      throw ParseError(0, "string checklist must be \"NO_COMMENT\"");
    }
    r.checklist = Checklist::no_comment();
  } else if (cl->is_array()) {
    std::vector<std::string> items;
    for (const auto& item : *cl) {
      if (!item.is_string()) throw ParseError(0, "checklist items must be strings");
      items.push_back(item.get<std::string>());
    }
    r.checklist = Checklist::from_items(std::move(items));
  } else {
    throw ParseError(0, "'checklist' must be a list of strings or \"NO_COMMENT\"");
  }

  if (auto it = j.find("length_mode"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(0, "'length_mode' must be a string");
    const auto mode = length_mode_from_string(it->get<std::string>());
    if (!mode) throw ParseError(0, "unknown length_mode '" + it->get<std::string>() + "'");
    r.length_mode = mode;
  }
  return r;
}

json to_json(const RewardRequest& r) {
  json j = {{"context", r.context}, {"review", r.review}};
  j["checklist"] = r.checklist.is_no_comment() ? json("NO_COMMENT") : json(r.checklist.items());
  if (r.length_mode) j["length_mode"] = std::string(to_string(*r.length_mode));
  return j;
}

}  // namespace sphinx::reward

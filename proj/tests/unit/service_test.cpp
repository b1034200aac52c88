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

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "scripted.hpp"
#include "sphinx/core/error.hpp"
#include "sphinx/reward/reward.hpp"
#include "sphinx/reward/service.hpp"

namespace sphinx::reward {
namespace {

using json = nlohmann::json;
using testing::Harness;
using testing::PromptKind;

// Judge count derived from the review so different requests get different answers.
void script_judge(Harness& h) {
  h.provider->add([](PromptKind k, const llm::CompletionRequest& r) -> std::optional<std::string> {
    if (k != PromptKind::kJudge) return std::nullopt;
    if (r.prompt.find("GARBAGE") != std::string::npos) return "no idea";
    return std::to_string(r.prompt.size() % 4);
  });
}

class LiveService {
 public:
  LiveService(ServiceConfig cfg, llm::PromptRunner& runner) : service(std::move(cfg), runner) {
    port = service.bind("127.0.0.1", 0);
    thread = std::thread([this] { service.listen(); });
    while (!service.running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  ~LiveService() {
    service.stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(std::chrono::seconds(30));
    return c;
  }

  RewardService service;
  int port = 0;
  std::thread thread;
};

RewardRequest request_number(int i) {
  RewardRequest r;
  r.context = "ctx " + std::to_string(i);
  std::string review;
  for (int k = 0; k <= i % 9; ++k) review += std::to_string(k + 1) + ". item " + std::to_string(i) + "\n";
  r.review = review;
  if (i % 5 == 0) {
    r.checklist = Checklist::no_comment();
    r.review = i % 10 == 0 ? "No comment." : review;
  } else {
    std::vector<std::string> items;
    for (int k = 0; k <= i % 3; ++k) items.push_back("check " + std::to_string(k));
    r.checklist = Checklist::from_items(items);
  }
  if (i % 7 == 0) r.length_mode = LengthMode::kTokens;
  return r;
}

TEST(BindAddress, Parse) {
  const auto a = parse_bind_address("0.0.0.0:9000");
  EXPECT_EQ(a.host, "0.0.0.0");
  EXPECT_EQ(a.port, 9000);
  EXPECT_THROW(parse_bind_address("host:"), Error);
  EXPECT_THROW(parse_bind_address("host:70000"), Error);
  EXPECT_THROW(parse_bind_address(":80"), Error);
}

TEST(RewardService, HealthAndSchemaErrors) {
  Harness h;
  script_judge(h);
  LiveService live({}, h.runner);
  auto c = live.client();
  auto health = c.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body), json({{"status", "ok"}}));

  for (const char* bad : {R"({"context":"","review":"x","checklist":[]})", R"({"review":"x"})", "not json",
                          R"({"context":"","review":"x","checklist":["a"],"length_mode":"words"})"}) {
    auto res = c.Post("/v1/reward", bad, "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400) << bad;
  }
  auto missing = c.Post("/v1/reward/batch", R"({"items":[]})", "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 400);
  EXPECT_EQ(c.Get("/v2/reward")->status, 404);
}

TEST(RewardService, SingleMatchesLibraryBitForBit) {
  Harness h;
  script_judge(h);
  LiveService live({}, h.runner);
  auto c = live.client();
  for (int i = 0; i < 40; ++i) {
    const auto req = request_number(i);
    const auto expected = crpo_reward(req, {}, h.runner, ServiceConfig{}.judge_model_id);
    auto res = c.Post("/v1/reward", to_json(req).dump(), "application/json");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200) << res->body;
    EXPECT_EQ(breakdown_from_json(json::parse(res->body)), expected) << i;
  }
}

TEST(RewardService, BatchOrderAndPartialFailure) {
  Harness h;
  script_judge(h);
  LiveService live({}, h.runner);
  auto c = live.client();
  json body = {{"requests", json::array()}};
  std::vector<RewardRequest> reqs;
  for (int i = 0; i < 12; ++i) reqs.push_back(request_number(i));
  reqs[5].review = "GARBAGE";
  reqs[5].checklist = Checklist::from_items({"a"});
  for (const auto& r : reqs) body["requests"].push_back(to_json(r));
  auto res = c.Post("/v1/reward/batch", body.dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const auto results = json::parse(res->body).at("results");
  ASSERT_EQ(results.size(), reqs.size());
  const auto expected = batch_reward_serial(reqs, {}, h.runner, ServiceConfig{}.judge_model_id);
  for (std::size_t i = 0; i < reqs.size(); ++i) EXPECT_EQ(breakdown_from_json(results[i]), expected[i]);
  EXPECT_EQ(breakdown_from_json(results[5]).error, std::string("JUDGE_UNPARSEABLE"));
  EXPECT_DOUBLE_EQ(breakdown_from_json(results[5]).reward, 0.0);

  auto empty = c.Post("/v1/reward/batch", R"({"requests":[]})", "application/json");
  ASSERT_TRUE(empty);
  EXPECT_EQ(json::parse(empty->body).at("results").size(), 0u);
}

TEST(RewardService, ConcurrentBatchesAreIndependent) {
  Harness h;
  script_judge(h);
  LiveService live({}, h.runner);
  constexpr int kBatches = 12;
  std::vector<int> failures(kBatches, 0);
  std::vector<std::thread> threads;
  for (int t = 0; t < kBatches; ++t) {
    threads.emplace_back([&, t] {
      std::vector<RewardRequest> reqs;
      for (int i = 0; i < 8; ++i) reqs.push_back(request_number(t * 8 + i));
      json body = {{"requests", json::array()}};
      for (const auto& r : reqs) body["requests"].push_back(to_json(r));
      auto c = live.client();
      auto res = c.Post("/v1/reward/batch", body.dump(), "application/json");
      if (!res || res->status != 200) {
        failures[t] = 1;
        return;
      }
      const auto expected = batch_reward_serial(reqs, {}, h.runner, ServiceConfig{}.judge_model_id);
      const auto results = json::parse(res->body).at("results");
      for (std::size_t i = 0; i < reqs.size(); ++i) {
        if (!(breakdown_from_json(results[i]) == expected[i])) failures[t] = 1;
      }
    });
  }
  for (auto& t : threads) t.join();
  for (int t = 0; t < kBatches; ++t) EXPECT_EQ(failures[t], 0) << "batch " << t;
}

TEST(RewardService, UnavailableGatewayIs503) {
  llm::Gateway gateway({}, nullptr);
  llm::TemplateLibrary templates(llm::default_prompts_dir());
  llm::PromptRunner runner(gateway, templates);
  RewardService service({}, runner);
  const auto req = to_json(request_number(1)).dump();
  EXPECT_EQ(service.handle("POST", "/v1/reward", req).status, 503);
  EXPECT_EQ(service.handle("POST", "/v1/reward", "{}").status, 400);
}

TEST(RewardService, ProviderFailureIs503ForSingleOnly) {
  Harness h;
  h.provider->add([](PromptKind k, const llm::CompletionRequest&) -> std::optional<std::string> {
    if (k == PromptKind::kJudge) throw ProviderError(400, false, "judge rejected");
    return std::nullopt;
  });
  RewardService service({}, h.runner);
  const auto single = service.handle("POST", "/v1/reward", to_json(request_number(1)).dump());
  EXPECT_EQ(single.status, 503);
  EXPECT_EQ(json::parse(single.body).at("error"), "PROVIDER_ERROR");
  const auto batch = service.handle(
      "POST", "/v1/reward/batch", json{{"requests", {to_json(request_number(1)), to_json(request_number(2))}}}.dump());
  EXPECT_EQ(batch.status, 200);
  for (const auto& r : json::parse(batch.body).at("results")) EXPECT_EQ(r.at("error"), "PROVIDER_ERROR");
}

}  // namespace
}  // namespace sphinx::reward

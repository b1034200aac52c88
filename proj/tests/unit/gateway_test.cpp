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

#include <atomic>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sphinx/core/error.hpp"
#include "sphinx/llm/gateway.hpp"

namespace sphinx::llm {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sphinx_gateway_" + name);
  fs::remove_all(dir);
  return dir;
}

std::shared_ptr<CallbackProvider> echo(std::atomic<int>& calls) {
  return std::make_shared<CallbackProvider>([&calls](const CompletionRequest& r) {
    ++calls;
    return ProviderReply{"echo:" + r.prompt, {static_cast<std::int64_t>(r.prompt.size()), 3}};
  });
}

GatewayConfig fast(GatewayMode mode, fs::path dir = {}) {
  GatewayConfig c;
  c.mode = mode;
  c.cache_dir = std::move(dir);
  c.backoff_initial = std::chrono::milliseconds(0);
  return c;
}

TEST(RequestKey, PureFunctionOfInputs) {
  const auto k = compute_request_key("p", "m", 0.0);
  EXPECT_EQ(k.size(), 64u);
  EXPECT_EQ(k, compute_request_key("p", "m", 0.0));
  EXPECT_NE(k, compute_request_key("p", "m", 0.5));
  EXPECT_NE(k, compute_request_key("p", "m2", 0.0));
  EXPECT_NE(k, compute_request_key("p ", "m", 0.0));
  EXPECT_EQ(make_request("p", "m").request_key, k);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Gateway, RecordServesSecondCallFromCache) {
  std::atomic<int> calls{0};
  const auto dir = fresh_dir("record");
  Gateway g(fast(GatewayMode::kRecord, dir), echo(calls));
  const auto a = g.complete("hello", "m");
  const auto b = g.complete("hello", "m");
  EXPECT_EQ(calls.load(), 1);
  EXPECT_FALSE(a.from_cache);
  EXPECT_TRUE(b.from_cache);
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.usage, b.usage);
  EXPECT_EQ(g.cache_hits(), 1);
  fs::remove_all(dir);
}

TEST(Gateway, ReplayHitsAndStrictMiss) {
  std::atomic<int> calls{0};
  const auto dir = fresh_dir("replay");
  {
    Gateway rec(fast(GatewayMode::kRecord, dir), echo(calls));
    rec.complete("cached", "m");
  }
  Gateway strict(fast(GatewayMode::kStrictReplay, dir), nullptr);
  const auto hit = strict.complete("cached", "m");
  EXPECT_EQ(hit.text, "echo:cached");
  EXPECT_TRUE(hit.from_cache);
  try {
    strict.complete("uncached", "m");
    FAIL() << "expected CACHE_MISS";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCacheMiss);
  }

  // Plain replay falls through to the provider without persisting.
  Gateway replay(fast(GatewayMode::kReplay, dir), echo(calls));
  EXPECT_FALSE(replay.complete("fresh", "m").from_cache);
  EXPECT_FALSE(replay.complete("fresh", "m").from_cache);
  EXPECT_EQ(calls.load(), 3);
  fs::remove_all(dir);
}

TEST(Gateway, RetriesRetriableErrorsOnly) {
  int attempts = 0;
  auto flaky = std::make_shared<CallbackProvider>([&](const CompletionRequest&) -> ProviderReply {
    if (++attempts < 3) throw ProviderError(503, true, "busy");
    return {"ok", {}};
  });
  Gateway g(fast(GatewayMode::kLive), flaky);
  EXPECT_EQ(g.complete("x", "m").text, "ok");
  EXPECT_EQ(attempts, 3);

  attempts = 0;
  auto fatal = std::make_shared<CallbackProvider>([&](const CompletionRequest&) -> ProviderReply {
    ++attempts;
    throw ProviderError(400, false, "bad request");
  });
  Gateway g2(fast(GatewayMode::kLive), fatal);
  EXPECT_THROW(g2.complete("x", "m"), ProviderError);
  EXPECT_EQ(attempts, 1);

  attempts = 0;
  auto down = std::make_shared<CallbackProvider>([&](const CompletionRequest&) -> ProviderReply {
    ++attempts;
    throw ProviderError(500, true, "down");
  });
  Gateway g3(fast(GatewayMode::kLive), down);
  try {
    g3.complete("x", "m");
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.status(), 500);
    EXPECT_TRUE(e.retriable());
  }
  EXPECT_EQ(attempts, 3);
}

TEST(Gateway, BoundsConcurrentProviderCalls) {
  std::atomic<int> calls{0};
  auto slow = std::make_shared<CallbackProvider>([&](const CompletionRequest& r) {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    return ProviderReply{r.prompt, {}};
  });
  auto cfg = fast(GatewayMode::kLive);
  cfg.max_in_flight = 2;
  Gateway g(cfg, slow);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 5; ++i) g.complete("p" + std::to_string(t * 10 + i), "m");
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(calls.load(), 40);
  EXPECT_LE(g.in_flight_high_water(), 2);
  EXPECT_GE(g.in_flight_high_water(), 1);
}

TEST(Gateway, ConfigErrors) {
  EXPECT_THROW(Gateway(fast(GatewayMode::kRecord), nullptr), Error);
  auto cfg = fast(GatewayMode::kLive);
  cfg.max_attempts = 0;
  EXPECT_THROW(Gateway(cfg, nullptr), Error);
  Gateway none(fast(GatewayMode::kLive), nullptr);
  EXPECT_FALSE(none.available());
  EXPECT_THROW(none.complete("x", "m"), ProviderError);
}

class FakeChatServer {
 public:
  FakeChatServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      last_auth = req.get_header_value("Authorization");
      const auto body = nlohmann::json::parse(req.body);
      if (status != 200) {
        res.status = status;
        res.set_content("{\"error\":\"nope\"}", "application/json");
        return;
      }
      const std::string prompt = body["messages"][0]["content"];
      const nlohmann::json reply = {
          {"choices", {{{"message", {{"role", "assistant"}, {"content", "model=" + body["model"].get<std::string>() + " " + prompt}}}}}},
          {"usage", {{"prompt_tokens", 11}, {"completion_tokens", 7}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeChatServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> hits{0};
  std::atomic<int> status{200};
  std::string last_auth;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpProvider, ChatCompletionRoundTrip) {
  FakeChatServer server;
  HttpProviderConfig cfg;
  cfg.base_url = server.url();
  cfg.api_key = "k-123";
  HttpProvider provider(cfg);
  const auto reply = provider.complete(make_request("hello", "gpt-x"));
  EXPECT_EQ(reply.text, "model=gpt-x hello");
  EXPECT_EQ(reply.usage, (Usage{11, 7}));
  EXPECT_EQ(server.last_auth, "Bearer k-123");
}

TEST(HttpProvider, StatusMapping) {
  FakeChatServer server;
  HttpProviderConfig cfg;
  cfg.base_url = server.url();
  HttpProvider provider(cfg);
  server.status = 429;
  try {
    provider.complete(make_request("x", "m"));
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.status(), 429);
    EXPECT_TRUE(e.retriable());
  }
  server.status = 401;
  try {
    provider.complete(make_request("x", "m"));
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.status(), 401);
    EXPECT_FALSE(e.retriable());
  }
}

TEST(HttpProvider, TransportFailureIsRetriable) {
  HttpProviderConfig cfg;
  cfg.base_url = "http://127.0.0.1:1";
  cfg.timeout = std::chrono::seconds(2);
  HttpProvider provider(cfg);
  try {
    provider.complete(make_request("x", "m"));
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.status(), 0);
    EXPECT_TRUE(e.retriable());
  }
  EXPECT_THROW(HttpProvider(HttpProviderConfig{}), Error);
}

}  // namespace
}  // namespace sphinx::llm

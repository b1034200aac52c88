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

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "sphinx/llm/prompt_runner.hpp"
#include "sphinx/reward/penalty.hpp"

namespace httplib {
class Server;
}

namespace sphinx::reward {

struct ServiceConfig {
  PenaltyConfig penalty;
  std::string judge_model_id = "o3-mini";
  int batch_jobs = 0;
  std::size_t max_batch = 4096;
};

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// "host:port"; a bare port binds 127.0.0.1. INVALID_CONFIG otherwise.
BindAddress parse_bind_address(std::string_view text);

/// HTTP front end of the reward library, versioned under /v1:
///   POST /v1/reward        single request  -> RewardBreakdown
///   POST /v1/reward/batch  {"requests":[]} -> {"results":[]}
///   GET  /healthz          -> {"status":"ok"}
/// Schema violations are 400. 503 when the gateway has no provider or cache,
/// or when a single request's judge call hits a provider failure.
class RewardService {
 public:
  struct Response {
    int status = 200;
    std::string body;
  };

  RewardService(ServiceConfig config, llm::PromptRunner& runner);
  ~RewardService();
  RewardService(const RewardService&) = delete;
  RewardService& operator=(const RewardService&) = delete;

  /// Transport-free request handling; the HTTP routes delegate here.
  Response handle(std::string_view method, std::string_view path, std::string_view body);

  /// Binds and returns the port (an ephemeral one when `port` is 0).
  int bind(const std::string& host, int port);
  /// Blocks serving until stop().
  void listen();
  void stop();
  bool running() const;

  std::int64_t requests_served() const noexcept { return served_.load(); }

 private:
  Response handle_single(std::string_view body);
  Response handle_batch(std::string_view body);

  ServiceConfig config_;
  llm::PromptRunner& runner_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<std::int64_t> served_{0};
};

}  // namespace sphinx::reward

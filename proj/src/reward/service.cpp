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

#include "sphinx/reward/service.hpp"

#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "sphinx/core/error.hpp"
#include "sphinx/core/serialize.hpp"
#include "sphinx/reward/reward.hpp"

namespace sphinx::reward {
namespace {

using json = nlohmann::json;

RewardService::Response error_response(int status, std::string_view code, std::string_view message) {
  return {status, dump_line(json{{"error", code}, {"message", message}})};
}

bool is_provider_failure(const RewardBreakdown& b) {
  return b.error && (*b.error == to_string(ErrorCode::kProviderError) ||
                     *b.error == to_string(ErrorCode::kCacheMiss));
}

}  // namespace

BindAddress parse_bind_address(std::string_view text) {
  BindAddress addr;
  std::string_view port_text = text;
  if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
    addr.host = std::string(text.substr(0, colon));
    port_text = text.substr(colon + 1);
  }
  int port = -1;
  const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535 ||
      addr.host.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "bad bind address '" + std::string(text) + "'");
  }
  addr.port = port;
  return addr;
}

RewardService::RewardService(ServiceConfig config, llm::PromptRunner& runner)
    : config_(std::move(config)), runner_(runner), server_(std::make_unique<httplib::Server>()) {
  config_.penalty.validate();
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const Response r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server_->Post("/v1/reward", route);
  server_->Post("/v1/reward/batch", route);
  server_->Get("/healthz", route);
}

RewardService::~RewardService() { stop(); }

RewardService::Response RewardService::handle(std::string_view method, std::string_view path,
                                              std::string_view body) {
  ++served_;
  if (method == "GET" && path == "/healthz") return {200, R"({"status":"ok"})"};
  if (method == "POST" && path == "/v1/reward") return handle_single(body);
  if (method == "POST" && path == "/v1/reward/batch") return handle_batch(body);
  return error_response(404, "NOT_FOUND", "no such endpoint");
}

RewardService::Response RewardService::handle_single(std::string_view body) {
  RewardRequest request;
  try {
    request = request_from_json(parse_json(body));
  } catch (const Error& e) {
    return error_response(400, to_string(e.code()), e.what());
  }
  if (!runner_.gateway().available()) {
    return error_response(503, "GATEWAY_UNAVAILABLE", "no LLM provider or replay cache");
  }
  const RewardBreakdown b = crpo_reward(request, config_.penalty, runner_, config_.judge_model_id);
  if (is_provider_failure(b)) return error_response(503, *b.error, "judge call failed");
  return {200, dump_line(to_json(b))};
}

RewardService::Response RewardService::handle_batch(std::string_view body) {
  std::vector<RewardRequest> requests;
  try {
    const json j = parse_json(body);
    if (!j.is_object() || !j.contains("requests") || !j.at("requests").is_array()) {
      throw ParseError(0, "batch body must be {\"requests\": [...]}");
    }
    const auto& arr = j.at("requests");
    if (arr.size() > config_.max_batch) {
      throw ParseError(0, "batch larger than " + std::to_string(config_.max_batch));
    }
    requests.reserve(arr.size());
    for (const auto& item : arr) requests.push_back(request_from_json(item));
  } catch (const Error& e) {
    return error_response(400, to_string(e.code()), e.what());
  }
  if (!runner_.gateway().available()) {
    return error_response(503, "GATEWAY_UNAVAILABLE", "no LLM provider or replay cache");
  }
  const auto results =
      batch_reward(requests, config_.penalty, runner_, config_.judge_model_id, config_.batch_jobs);
  json out = json::array();
  for (const auto& b : results) out.push_back(to_json(b));
  return {200, dump_line(json{{"results", std::move(out)}})};
}

int RewardService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::kIoError, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void RewardService::listen() { server_->listen_after_bind(); }

void RewardService::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

bool RewardService::running() const { return server_ && server_->is_running(); }

}  // namespace sphinx::reward

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

#include "sphinx/llm/gateway.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "sphinx/core/error.hpp"
#include "sphinx/core/serialize.hpp"

namespace sphinx::llm {
namespace {

using json = nlohmann::json;

bool is_valid_key(const std::string& key) {
  return key.size() == 64 && std::all_of(key.begin(), key.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

class InFlightGuard {
 public:
  InFlightGuard(std::counting_semaphore<>& sem, std::atomic<int>& in_flight,
                std::atomic<int>& high_water)
      : sem_(sem), in_flight_(in_flight) {
    sem_.acquire();
    const int now = ++in_flight_;
    int prev = high_water.load();
    while (now > prev && !high_water.compare_exchange_weak(prev, now)) {
    }
  }
  ~InFlightGuard() {
    --in_flight_;
    sem_.release();
  }
  InFlightGuard(const InFlightGuard&) = delete;
  InFlightGuard& operator=(const InFlightGuard&) = delete;

 private:
  std::counting_semaphore<>& sem_;
  std::atomic<int>& in_flight_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string compute_request_key(std::string_view prompt, std::string_view model_id,
                                double temperature) {
  const json canonical = {{"model_id", model_id}, {"prompt", prompt}, {"temperature", temperature}};
  return sha256_hex(dump_line(canonical));
}

CompletionRequest make_request(std::string prompt, std::string model_id, double temperature,
                               std::int64_t max_output_tokens) {
  CompletionRequest req;
  req.request_key = compute_request_key(prompt, model_id, temperature);
  req.prompt = std::move(prompt);
  req.model_id = std::move(model_id);
  req.temperature = temperature;
  req.max_output_tokens = max_output_tokens;
  return req;
}

HttpProviderConfig HttpProviderConfig::from_env() {
  HttpProviderConfig cfg;
  if (const char* url = std::getenv("SPHINX_LLM_BASE_URL")) cfg.base_url = url;
  if (const char* key = std::getenv("SPHINX_LLM_API_KEY")) cfg.api_key = key;
  return cfg;
}

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "LLM base URL is not set (SPHINX_LLM_BASE_URL)");
  }
}

ProviderReply HttpProvider::complete(const CompletionRequest& request) {
  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  const json body = {
      {"model", request.model_id},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
  };
  auto res = client.Post(config_.endpoint_path, headers, dump_line(body), "application/json");
  if (!res) {
    throw ProviderError(0, true, "transport error: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    const bool retriable = res->status == 429 || res->status >= 500;
    throw ProviderError(res->status, retriable, res->body.substr(0, 512));
  }
  const json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw ProviderError(res->status, false, "response is not JSON");
  try {
    ProviderReply out;
    out.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    if (auto it = reply.find("usage"); it != reply.end() && it->is_object()) {
      out.usage.input_tokens = it->value("prompt_tokens", std::int64_t{0});
      out.usage.output_tokens = it->value("completion_tokens", std::int64_t{0});
    }
    return out;
  } catch (const json::exception& e) {
    throw ProviderError(res->status, false, std::string("unexpected response shape: ") + e.what());
  }
}

ReplayCache::ReplayCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<Completion> ReplayCache::get(const std::string& request_key) const {
  if (!is_valid_key(request_key)) return std::nullopt;
  const auto path = dir_ / (request_key + ".json");
  std::shared_lock lock(mu_);
  if (!std::filesystem::exists(path)) return std::nullopt;
  const json entry = parse_json(read_file(path));
  Completion c;
  c.text = entry.at("text").get<std::string>();
  c.model_id = entry.at("model_id").get<std::string>();
  c.usage.input_tokens = entry.at("usage").at("input_tokens").get<std::int64_t>();
  c.usage.output_tokens = entry.at("usage").at("output_tokens").get<std::int64_t>();
  c.from_cache = true;
  return c;
}

void ReplayCache::put(const CompletionRequest& request, const ProviderReply& reply) {
  if (!is_valid_key(request.request_key)) {
    throw Error(ErrorCode::kInvalidConfig, "request has no valid request_key");
  }
  const json entry = {
      {"request_key", request.request_key},
      {"model_id", request.model_id},
      {"temperature", request.temperature},
      {"text", reply.text},
      {"usage", {{"input_tokens", reply.usage.input_tokens}, {"output_tokens", reply.usage.output_tokens}}},
      {"metadata", {{"max_output_tokens", request.max_output_tokens}, {"prompt_bytes", request.prompt.size()}}},
  };
  const auto path = dir_ / (request.request_key + ".json");
  const auto tmp = dir_ / (request.request_key + ".json.tmp");
  std::unique_lock lock(mu_);
  std::filesystem::create_directories(dir_);
  write_file(tmp, entry.dump(2, ' ', false, json::error_handler_t::replace) + "\n");
  std::filesystem::rename(tmp, path);
}

std::string_view to_string(GatewayMode mode) {
  switch (mode) {
    case GatewayMode::kLive: return "live";
    case GatewayMode::kRecord: return "record";
    case GatewayMode::kReplay: return "replay";
    case GatewayMode::kStrictReplay: return "strict-replay";
  }
  return "live";
}

Gateway::Gateway(GatewayConfig config, std::shared_ptr<Provider> provider)
    : config_(std::move(config)),
      provider_(std::move(provider)),
      slots_(std::max(1, config_.max_in_flight)) {
  if (config_.max_attempts < 1) throw Error(ErrorCode::kInvalidConfig, "max_attempts must be >= 1");
  if (config_.max_in_flight < 1) throw Error(ErrorCode::kInvalidConfig, "max_in_flight must be >= 1");
  if (config_.mode != GatewayMode::kLive) {
    if (config_.cache_dir.empty()) {
      throw Error(ErrorCode::kInvalidConfig,
                  std::string(to_string(config_.mode)) + " mode needs a cache directory");
    }
    cache_ = std::make_unique<ReplayCache>(config_.cache_dir);
  }
}

bool Gateway::available() const noexcept {
  if (provider_) return true;
  return cache_ != nullptr && std::filesystem::is_directory(cache_->dir());
}

Completion Gateway::complete(std::string prompt, const std::string& model_id, double temperature) {
  return complete(make_request(std::move(prompt), model_id, temperature));
}

Completion Gateway::complete(const CompletionRequest& request) {
  CompletionRequest req = request;
  if (req.request_key.empty()) {
    req.request_key = compute_request_key(req.prompt, req.model_id, req.temperature);
  }
  if (cache_) {
    if (auto hit = cache_->get(req.request_key)) {
      ++cache_hits_;
      return *hit;
    }
    if (config_.mode == GatewayMode::kStrictReplay) {
      throw Error(ErrorCode::kCacheMiss, req.request_key);
    }
  }
  Completion out = call_provider(req);
  if (config_.mode == GatewayMode::kRecord) {
    cache_->put(req, {out.text, out.usage});
  }
  return out;
}

Completion Gateway::call_provider(const CompletionRequest& req) {
  if (!provider_) throw ProviderError(503, false, "no LLM provider configured");
  auto backoff = config_.backoff_initial;
  for (int attempt = 1;; ++attempt) {
    try {
      ProviderReply reply;
      {
        InFlightGuard guard(slots_, in_flight_, high_water_);
        ++provider_calls_;
        reply = provider_->complete(req);
      }
      Completion c;
      c.text = std::move(reply.text);
      c.model_id = req.model_id;
      c.usage = reply.usage;
      c.from_cache = false;
      return c;
    } catch (const ProviderError& e) {
      if (!e.retriable() || attempt >= config_.max_attempts) throw;
      spdlog::warn("provider call failed (attempt {}/{}): {}", attempt, config_.max_attempts, e.what());
    }
    if (backoff.count() > 0) std::this_thread::sleep_for(backoff);
    backoff = std::min(backoff * 2, config_.backoff_max);
  }
}

}  // namespace sphinx::llm

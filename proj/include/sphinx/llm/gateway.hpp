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
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <shared_mutex>
#include <string>
#include <string_view>

namespace sphinx::llm {

struct Usage {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;

  friend bool operator==(const Usage&, const Usage&) = default;
};

struct CompletionRequest {
  std::string prompt;
  std::string model_id;
  double temperature = 0.0;
  std::int64_t max_output_tokens = 4096;
  std::string request_key;
};

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// SHA-256 (hex) over the canonical JSON of (model_id, prompt, temperature).
/// max_output_tokens is not part of the key.
std::string compute_request_key(std::string_view prompt, std::string_view model_id,
                                double temperature);

/// Builds a request with its key filled in.
CompletionRequest make_request(std::string prompt, std::string model_id, double temperature = 0.0,
                               std::int64_t max_output_tokens = 4096);

struct Completion {
  std::string text;
  std::string model_id;
  Usage usage;
  bool from_cache = false;
};

struct ProviderReply {
  std::string text;
  Usage usage;
};

/// A completion backend. Implementations throw ProviderError; the gateway
/// owns retries.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderReply complete(const CompletionRequest& request) = 0;
};

/// Adapts a callable, for tests and offline fixture generation.
class CallbackProvider : public Provider {
 public:
  using Fn = std::function<ProviderReply(const CompletionRequest&)>;
  explicit CallbackProvider(Fn fn) : fn_(std::move(fn)) {}
  ProviderReply complete(const CompletionRequest& request) override { return fn_(request); }

 private:
  Fn fn_;
};

struct HttpProviderConfig {
  std::string base_url;                              // e.g. https://api.openai.com
  std::string endpoint_path = "/v1/chat/completions";
  std::string api_key;
  std::chrono::seconds timeout{120};

  /// base_url and api_key from SPHINX_LLM_BASE_URL / SPHINX_LLM_API_KEY.
  static HttpProviderConfig from_env();
};

/// Chat-completion style JSON over HTTP(S): one user message in, the first
/// choice's message content out. 429 and 5xx are retriable.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderConfig config);
  ProviderReply complete(const CompletionRequest& request) override;

 private:
  HttpProviderConfig config_;
};

/// Content-addressed completion store: one `<request_key>.json` per entry.
/// Reads may run concurrently; writes are serialized and atomic on disk.
class ReplayCache {
 public:
  explicit ReplayCache(std::filesystem::path dir);

  std::optional<Completion> get(const std::string& request_key) const;
  void put(const CompletionRequest& request, const ProviderReply& reply);
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mu_;
};

enum class GatewayMode {
  kLive,          // provider only
  kRecord,        // cache first, provider on miss, persist
  kReplay,        // cache first, provider on miss, no persist
  kStrictReplay,  // cache only, CACHE_MISS otherwise
};

std::string_view to_string(GatewayMode mode);

struct GatewayConfig {
  GatewayMode mode = GatewayMode::kLive;
  std::filesystem::path cache_dir;
  int max_attempts = 3;
  int max_in_flight = 8;
  std::chrono::milliseconds backoff_initial{250};
  std::chrono::milliseconds backoff_max{8000};
};

/// Thread-safe front door for every LLM call in the pipeline.
class Gateway {
 public:
  Gateway(GatewayConfig config, std::shared_ptr<Provider> provider);

  Completion complete(const CompletionRequest& request);
  Completion complete(std::string prompt, const std::string& model_id, double temperature = 0.0);

  /// True when a call could possibly succeed: a provider is attached, or the
  /// mode serves from a cache.
  bool available() const noexcept;

  const GatewayConfig& config() const noexcept { return config_; }
  std::int64_t provider_calls() const noexcept { return provider_calls_.load(); }
  std::int64_t cache_hits() const noexcept { return cache_hits_.load(); }
  int in_flight_high_water() const noexcept { return high_water_.load(); }

 private:
  Completion call_provider(const CompletionRequest& request);

  GatewayConfig config_;
  std::shared_ptr<Provider> provider_;
  std::unique_ptr<ReplayCache> cache_;
  std::counting_semaphore<> slots_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> high_water_{0};
  std::atomic<std::int64_t> provider_calls_{0};
  std::atomic<std::int64_t> cache_hits_{0};
};

}  // namespace sphinx::llm

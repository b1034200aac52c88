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

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sphinx/bench/benchmark.hpp"
#include "sphinx/eval/evaluate.hpp"
#include "sphinx/ingest/filter.hpp"
#include "sphinx/llm/gateway.hpp"
#include "sphinx/reward/service.hpp"

namespace sphinx::cli {

/// Parses the TOML subset used by config files: `[section]` headers,
/// `key = value` pairs, basic and literal strings, integers, floats,
/// booleans, flat arrays (may span lines) and `#` comments. Result is
/// {"": {top-level keys}, "section": {...}}. Throws PARSE_ERROR.
nlohmann::json parse_config_text(std::string_view text);

struct RunConfig {
  int jobs = 0;

  // [ingest] and [filter]
  ingest::IngestSpec ingest;
  std::string code_host_url = "https://api.github.com";

  // [synthesis]
  std::string generator_model = "gpt-4o";

  // [benchmark]
  bench::BenchmarkSpec benchmark;
  std::string classifier_model = "gpt-4o";

  // [eval]
  eval::EvalConfig eval;
  std::string model_name = "candidate";

  // [reward]
  reward::ServiceConfig reward;
  std::string reward_bind = "127.0.0.1:8600";

  // [gateway]
  llm::GatewayConfig gateway;
  double temperature = 0.0;
  std::string safety_model = "gpt-4o";
  std::string prompts_dir;  // empty: built-in templates
  std::string llm_base_url;
  std::string llm_endpoint = "/v1/chat/completions";
  int llm_timeout_seconds = 120;

  llm::ModelRoles model_roles() const;
};

/// Overlays a parsed config document on the defaults. Unknown sections or
/// keys and out-of-range values raise INVALID_CONFIG.
RunConfig resolve_config(const nlohmann::json& document, RunConfig base = {});

RunConfig load_config(const std::filesystem::path& path);

/// Canonical form of the resolved config. Secrets never appear here.
nlohmann::json to_json(const RunConfig& config);

/// SHA-256 of the canonical JSON; a pure function of the resolved config.
std::string config_hash(const RunConfig& config);

}  // namespace sphinx::cli

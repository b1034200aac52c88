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
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphinx/llm/gateway.hpp"

namespace sphinx::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitUsage = 2;

/// Record of one CLI invocation, written to <out>/manifest.json.
struct RunManifest {
  std::string command;
  std::string config_hash;
  nlohmann::json config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string started_at;
  std::string finished_at;
  std::size_t records_in = 0;
  std::size_t records_out = 0;
  std::size_t errors = 0;
  int exit_code = 0;
  std::string message;
  nlohmann::json gateway = nlohmann::json::object();
};

nlohmann::json to_json(const RunManifest& manifest);

/// Overrides for embedding the CLI; tests and fixture tools inject a
/// provider instead of talking HTTP.
struct RunHooks {
  std::shared_ptr<llm::Provider> provider;
};

/// Entry point of the `sphinx` binary. args[0] is the program name.
/// Returns 0 on success, 1 when some cases errored, 2 on usage or config
/// errors.
int run(const std::vector<std::string>& args, const RunHooks& hooks = {});
int run(int argc, const char* const* argv);

}  // namespace sphinx::cli

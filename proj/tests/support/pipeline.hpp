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

#include "sphinx/llm/gateway.hpp"

namespace sphinx::testing {

/// Files under a pipeline run directory whose bytes must not vary between runs.
std::vector<std::string> pipeline_outputs(const std::filesystem::path& run_dir);

/// Compiler, standard library, OS and architecture of this build.
std::string platform_fingerprint();

/// filter, synthesize, build-bench and evaluate through the CLI entry point.
/// `fixture_dir` holds records.jsonl and config.toml; `gateway_flags` selects
/// the cache mode. Returns the first non-zero exit code, or 0.
int run_pipeline(const std::filesystem::path& fixture_dir, const std::filesystem::path& run_dir,
                 const std::vector<std::string>& gateway_flags, std::shared_ptr<llm::Provider> provider);

}  // namespace sphinx::testing

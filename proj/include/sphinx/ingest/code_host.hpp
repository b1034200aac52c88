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

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphinx/core/types.hpp"

namespace sphinx::ingest {

struct CodeHostConfig {
  std::string base_url = "https://api.github.com";
  std::string token;
  std::chrono::seconds timeout{60};

  /// SPHINX_CODEHOST_BASE_URL and SPHINX_CODEHOST_TOKEN (GITHUB_TOKEN as a
  /// fallback for the token).
  static CodeHostConfig from_env();
};

/// Issue numbers referenced from a PR body, in order of first appearance.
/// Recognizes `#123`, `owner/repo#123` for the same repository and
/// `.../issues/123` links. `self_number` is excluded.
std::vector<std::int64_t> issue_references(std::string_view body, std::string_view repo_id,
                                           std::int64_t self_number);

/// Decodes the base64 payload of a contents response; embedded newlines are
/// ignored.
std::string decode_base64(std::string_view encoded);

/// Read-only client for a GitHub-compatible REST API.
///
/// Errors: NOT_FOUND on 404, AUTH_ERROR on 401 (and 403 without rate-limit
/// headers), RATE_LIMITED on 429 or an exhausted 403. Transport failures
/// surface as PROVIDER_ERROR.
class CodeHostClient {
 public:
  explicit CodeHostClient(CodeHostConfig config);

  /// Numbers of closed PRs, newest first, at most `limit`.
  std::vector<std::int64_t> list_closed_prs(const std::string& repo_id, std::int64_t limit);

  /// Assembles a record from the PR, its diff, its file list and the file
  /// contents at the base and merge commits. Multi-file PRs keep the first
  /// file's contents and report the real file_count.
  PullRequestRecord fetch_pr(const std::string& repo_id, std::int64_t pr_number);

  nlohmann::json get_json(const std::string& path);
  std::string get_text(const std::string& path, const std::string& accept);

 private:
  std::string file_at(const std::string& repo_id, const std::string& path, const std::string& ref);

  CodeHostConfig config_;
};

}  // namespace sphinx::ingest

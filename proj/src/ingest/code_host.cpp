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


#include "sphinx/ingest/code_host.hpp"

#include <cstdlib>
#include <regex>
#include <set>

#include <httplib.h>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "sphinx/core/error.hpp"
#include "sphinx/core/serialize.hpp"

namespace sphinx::ingest {
namespace {

std::string string_or_empty(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return "";
  return j.at(key).get<std::string>();
}

std::string url_encode_path(std::string_view path) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (const unsigned char ch : path) {
    if (std::isalnum(ch) || ch == '/' || ch == '-' || ch == '_' || ch == '.' || ch == '~') {
      out.push_back(static_cast<char>(ch));
    } else {
      out.push_back('%');
      out.push_back(kHex[ch >> 4]);
      out.push_back(kHex[ch & 0xF]);
    }
  }
  return out;
}

[[noreturn]] void raise_for_status(const httplib::Response& res, const std::string& path) {
  const std::string where = path + " -> " + std::to_string(res.status);
  if (res.status == 404) throw Error(ErrorCode::kNotFound, path);
  if (res.status == 401) throw Error(ErrorCode::kAuthError, where);
  if (res.status == 429 || res.status == 403) {
    double retry_after = -1.0;
    if (res.has_header("Retry-After")) {
      retry_after = std::atof(res.get_header_value("Retry-After").c_str());
    } else if (res.get_header_value("X-RateLimit-Remaining") == "0" &&
               res.has_header("X-RateLimit-Reset")) {
      const auto reset = std::atoll(res.get_header_value("X-RateLimit-Reset").c_str());
      const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
      retry_after = static_cast<double>(std::max<long long>(0, reset - now));
    }
    if (res.status == 429 || retry_after >= 0.0) {
      throw RateLimitedError(std::max(0.0, retry_after), where);
    }
    throw Error(ErrorCode::kAuthError, where);
  }
  throw ProviderError(res.status, res.status >= 500, where);
}

}  // namespace

CodeHostConfig CodeHostConfig::from_env() {
  CodeHostConfig cfg;
  if (const char* url = std::getenv("SPHINX_CODEHOST_BASE_URL"); url && *url) cfg.base_url = url;
  if (const char* tok = std::getenv("SPHINX_CODEHOST_TOKEN"); tok && *tok) {
    cfg.token = tok;
  } else if (const char* gh = std::getenv("GITHUB_TOKEN"); gh && *gh) {
    cfg.token = gh;
  }
  return cfg;
}

std::vector<std::int64_t> issue_references(std::string_view body, std::string_view repo_id,
                                           std::int64_t self_number) {
  // owner/repo prefix (optional), then #N; or an issues/N link.
  static const std::regex kRef(R"((?:([\w.-]+/[\w.-]+))?#(\d+)\b|/([\w.-]+/[\w.-]+)/issues/(\d+))");
  std::vector<std::int64_t> out;
  std::set<std::int64_t> seen;
  const std::string text(body);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kRef); it != std::sregex_iterator();
       ++it) {
    const auto& m = *it;
    std::string repo;
    std::string number;
    if (m[2].matched) {
      repo = m[1].str();
      number = m[2].str();
      const auto pos = static_cast<std::size_t>(m.position(0));
      if (repo.empty() && pos > 0) {
        const unsigned char prev = static_cast<unsigned char>(text[pos - 1]);
        if (std::isalnum(prev) || prev == '&') continue;  // anchors, HTML entities
      }
    } else {
      repo = m[3].str();
      number = m[4].str();
    }
    if (!repo.empty() && repo != repo_id) continue;
    if (number.size() > 12) continue;
    const std::int64_t n = std::stoll(number);
    if (n <= 0 || n == self_number) continue;
    if (seen.insert(n).second) out.push_back(n);
  }
  return out;
}

std::string decode_base64(std::string_view encoded) {
  std::string clean;
  clean.reserve(encoded.size());
  for (const char ch : encoded) {
    if (ch != '\n' && ch != '\r' && ch != ' ') clean.push_back(ch);
  }
  if (clean.size() % 4 != 0) throw ParseError(0, "base64 length not a multiple of 4");
  std::string out(clean.size() / 4 * 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(clean.data()),
                                static_cast<int>(clean.size()));
  if (n < 0) throw ParseError(0, "invalid base64 payload");
  std::size_t pad = 0;
  if (!clean.empty() && clean.back() == '=') ++pad;
  if (clean.size() > 1 && clean[clean.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

CodeHostClient::CodeHostClient(CodeHostConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw Error(ErrorCode::kInvalidConfig, "code host base_url is empty");
}

std::string CodeHostClient::get_text(const std::string& path, const std::string& accept) {
  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  httplib::Headers headers{{"Accept", accept}, {"User-Agent", "sphinx-ingest"}};
  if (!config_.token.empty()) headers.emplace("Authorization", "Bearer " + config_.token);
  auto res = client.Get(path, headers);
  if (!res) throw ProviderError(0, true, path + ": " + httplib::to_string(res.error()));
  if (res->status != 200) raise_for_status(*res, path);
  return res->body;
}

nlohmann::json CodeHostClient::get_json(const std::string& path) {
  return parse_json(get_text(path, "application/vnd.github+json"));
}

std::vector<std::int64_t> CodeHostClient::list_closed_prs(const std::string& repo_id,
                                                          std::int64_t limit) {
  std::vector<std::int64_t> out;
  for (int page = 1; static_cast<std::int64_t>(out.size()) < limit; ++page) {
    const auto arr = get_json("/repos/" + repo_id + "/pulls?state=closed&per_page=100&page=" +
                              std::to_string(page));
    if (!arr.is_array() || arr.empty()) break;
    for (const auto& pr : arr) {
      if (static_cast<std::int64_t>(out.size()) >= limit) break;
      out.push_back(pr.at("number").get<std::int64_t>());
    }
    if (arr.size() < 100) break;
  }
  return out;
}

std::string CodeHostClient::file_at(const std::string& repo_id, const std::string& path,
                                    const std::string& ref) {
  const auto j = get_json("/repos/" + repo_id + "/contents/" + url_encode_path(path) + "?ref=" + ref);
  if (string_or_empty(j, "encoding") != "base64") {
    throw ParseError(0, "unexpected content encoding for " + path);
  }
  return decode_base64(j.at("content").get<std::string>());
}

PullRequestRecord CodeHostClient::fetch_pr(const std::string& repo_id, std::int64_t pr_number) {
  const std::string base = "/repos/" + repo_id + "/pulls/" + std::to_string(pr_number);
  const auto pr = get_json(base);

  PullRequestRecord r;
  r.repo_id = repo_id;
  r.pr_number = pr_number;
  r.title = string_or_empty(pr, "title");
  r.description = string_or_empty(pr, "body");
  r.merged = pr.value("merged", false) || !string_or_empty(pr, "merged_at").empty();
  r.gt_diff = get_text(base, "application/vnd.github.v3.diff");

  const auto files = get_json(base + "/files?per_page=100");
  r.file_count = static_cast<std::int64_t>(files.size());
  if (files.empty()) throw ParseError(0, "PR " + case_id(r) + " lists no files");
  const auto& first = files.front();
  const std::string filename = first.at("filename").get<std::string>();
  const std::string status = string_or_empty(first, "status");

  auto lang = language_from_path(filename);
  if (!lang && pr.contains("base") && pr.at("base").contains("repo")) {
    lang = language_from_string(string_or_empty(pr.at("base").at("repo"), "language"));
  }
  if (!lang) throw Error(ErrorCode::kNotFound, "no supported language for " + filename);
  r.language = *lang;

  const std::string base_sha = pr.at("base").at("sha").get<std::string>();
  std::string after_sha = string_or_empty(pr, "merge_commit_sha");
  if (after_sha.empty()) after_sha = pr.at("head").at("sha").get<std::string>();
  const std::string before_path = first.contains("previous_filename")
                                      ? first.at("previous_filename").get<std::string>()
                                      : filename;
  if (status != "added") r.original_code = file_at(repo_id, before_path, base_sha);
  if (status != "removed") r.merged_code = file_at(repo_id, filename, after_sha);

  for (const std::int64_t n : issue_references(r.description, repo_id, pr_number)) {
    try {
      const auto issue = get_json("/repos/" + repo_id + "/issues/" + std::to_string(n));
      if (issue.contains("pull_request")) continue;  // cross-reference to another PR
      std::string body = string_or_empty(issue, "title");
      const std::string text = string_or_empty(issue, "body");
      if (!text.empty()) body += "\n\n" + text;
      r.linked_issues.push_back({std::to_string(n), std::move(body)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotFound) throw;
      spdlog::warn("{} references missing issue #{}", case_id(r), n);
    }
  }
  return r;
}

}  // namespace sphinx::ingest

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
#include <map>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "sphinx/core/error.hpp"
#include "sphinx/ingest/code_host.hpp"

namespace sphinx::ingest {
namespace {

using json = nlohmann::json;

std::string base64(std::string_view raw) {
  std::string out(4 * ((raw.size() + 2) / 3), '\0');
  EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), reinterpret_cast<const unsigned char*>(raw.data()),
                  static_cast<int>(raw.size()));
  // Wrap the way the API does, to exercise newline stripping.
  for (std::size_t i = 60; i < out.size(); i += 61) out.insert(i, "\n");
  return out;
}

// In-memory code host speaking the subset of the REST API the client uses.
class FakeCodeHost {
 public:
  FakeCodeHost() {
    server_.Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
      std::string key = req.path;
      if (!req.params.empty()) {
        key += "?";
        bool first = true;
        for (const auto& [k, v] : req.params) {
          if (!first) key += "&";
          key += k + "=" + v;
          first = false;
        }
      }
      const std::string accept = req.get_header_value("Accept");
      if (accept == "application/vnd.github.v3.diff") key += " [diff]";
      last_auth = req.get_header_value("Authorization");
      ++hits;
      std::lock_guard lock(mu_);
      const auto it = routes_.find(key);
      if (it == routes_.end()) {
        res.status = 404;
        res.set_content(R"({"message":"Not Found"})", "application/json");
        return;
      }
      res.status = it->second.status;
      for (const auto& [h, v] : it->second.headers) res.set_header(h, v);
      res.set_content(it->second.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeCodeHost() {
    server_.stop();
    thread_.join();
  }

  void route(const std::string& key, std::string body, int status = 200,
             std::map<std::string, std::string> headers = {}) {
    std::lock_guard lock(mu_);
    routes_[key] = {status, std::move(body), std::move(headers)};
  }

  CodeHostConfig config() const {
    CodeHostConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_);
    c.token = "tok";
    c.timeout = std::chrono::seconds(5);
    return c;
  }

  std::atomic<int> hits{0};
  std::string last_auth;

 private:
  struct Route {
    int status = 200;
    std::string body;
    std::map<std::string, std::string> headers;
  };
  std::mutex mu_;
  std::map<std::string, Route> routes_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

void add_pr(FakeCodeHost& host, int number, bool merged, std::vector<std::string> files, std::string body) {
  const std::string base = "/repos/acme/lib/pulls/" + std::to_string(number);
  json pr = {{"number", number},
             {"title", "Fix overflow in parse"},
             {"body", body},
             {"merged", merged},
             {"merged_at", merged ? json("2024-05-01T00:00:00Z") : json(nullptr)},
             {"merge_commit_sha", "m" + std::to_string(number)},
             {"base", {{"sha", "b" + std::to_string(number)}, {"repo", {{"language", "Python"}}}}},
             {"head", {{"sha", "h" + std::to_string(number)}}}};
  host.route(base, pr.dump());
  host.route(base + " [diff]", "--- a/src/parse.py\n+++ b/src/parse.py\n@@\n-old\n+new\n");
  json list = json::array();
  for (const auto& f : files) list.push_back({{"filename", f}, {"status", "modified"}});
  host.route(base + "/files?per_page=100", list.dump());
  for (const auto& f : files) {
    host.route("/repos/acme/lib/contents/" + f + "?ref=b" + std::to_string(number),
               json{{"encoding", "base64"}, {"content", base64("old contents of " + f + "\n")}}.dump());
    host.route("/repos/acme/lib/contents/" + f + "?ref=m" + std::to_string(number),
               json{{"encoding", "base64"}, {"content", base64("new contents of " + f + "\n")}}.dump());
  }
}

TEST(IssueReferences, ExplicitLinksOnly) {
  const std::string body =
      "Fixes #12 and acme/lib#13. See https://example.com/acme/lib/issues/14 and other/repo#99.\n"
      "Color &#35;fff, anchor page#15, self #7, repeat #12.";
  EXPECT_EQ(issue_references(body, "acme/lib", 7), (std::vector<std::int64_t>{12, 13, 14}));
  EXPECT_TRUE(issue_references("", "acme/lib", 1).empty());
}

TEST(Base64, DecodesWrappedPayload) {
  for (const std::string raw : {"", "a", "ab", "abc", "abcd", "caf\xC3\xA9 \n\t line\n"}) {
    EXPECT_EQ(decode_base64(base64(raw)), raw);
  }
  EXPECT_THROW(decode_base64("abc"), Error);
}

TEST(FetchPr, SingleFileMerged) {
  FakeCodeHost host;
  add_pr(host, 5, true, {"src/parse.py"}, "Overflow on long input. Closes #3.");
  host.route("/repos/acme/lib/issues/3", json{{"title", "Parser crash"}, {"body", "Stack trace here"}}.dump());
  CodeHostClient client(host.config());
  const auto r = client.fetch_pr("acme/lib", 5);
  EXPECT_EQ(r.repo_id, "acme/lib");
  EXPECT_EQ(r.pr_number, 5);
  EXPECT_EQ(r.language, Language::kPython);
  EXPECT_TRUE(r.merged);
  EXPECT_EQ(r.file_count, 1);
  EXPECT_EQ(r.title, "Fix overflow in parse");
  EXPECT_EQ(r.original_code, "old contents of src/parse.py\n");
  EXPECT_EQ(r.merged_code, "new contents of src/parse.py\n");
  EXPECT_NE(r.gt_diff.find("+new"), std::string::npos);
  ASSERT_EQ(r.linked_issues.size(), 1u);
  EXPECT_EQ(r.linked_issues[0].id, "3");
  EXPECT_EQ(r.linked_issues[0].body, "Parser crash\n\nStack trace here");
  EXPECT_EQ(host.last_auth, "Bearer tok");
}

TEST(FetchPr, UnmergedMultiFileAndSkippedIssues) {
  FakeCodeHost host;
  add_pr(host, 6, false, {"src/a.py", "src/b.py"}, "Refs #4 and #8.");
  host.route("/repos/acme/lib/issues/4", json{{"title", "t"}, {"pull_request", json::object()}}.dump());
  CodeHostClient client(host.config());
  const auto r = client.fetch_pr("acme/lib", 6);
  EXPECT_FALSE(r.merged);
  EXPECT_EQ(r.file_count, 2);
  EXPECT_EQ(r.original_code, "old contents of src/a.py\n");
  EXPECT_TRUE(r.linked_issues.empty());
}

TEST(FetchPr, ErrorMapping) {
  FakeCodeHost host;
  CodeHostClient client(host.config());
  try {
    client.fetch_pr("acme/lib", 404);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }

  host.route("/repos/acme/lib/pulls/1", "{}", 401);
  try {
    client.fetch_pr("acme/lib", 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAuthError);
  }

  host.route("/repos/acme/lib/pulls/2", "{}", 429, {{"Retry-After", "17"}});
  try {
    client.fetch_pr("acme/lib", 2);
    FAIL();
  } catch (const RateLimitedError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRateLimited);
    EXPECT_DOUBLE_EQ(e.retry_after_seconds(), 17.0);
  }

  host.route("/repos/acme/lib/pulls/3", "{}", 403, {{"X-RateLimit-Remaining", "0"}, {"X-RateLimit-Reset", "0"}});
  try {
    client.fetch_pr("acme/lib", 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRateLimited);
  }

  host.route("/repos/acme/lib/pulls/4", "{}", 403);
  try {
    client.fetch_pr("acme/lib", 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAuthError);
  }

  host.route("/repos/acme/lib/pulls/5", "{}", 502);
  try {
    client.fetch_pr("acme/lib", 5);
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.status(), 502);
    EXPECT_TRUE(e.retriable());
  }
}

TEST(ListClosedPrs, Paginates) {
  FakeCodeHost host;
  json page1 = json::array();
  for (int i = 0; i < 100; ++i) page1.push_back({{"number", 500 - i}});
  json page2 = json::array({{{"number", 400}}, {{"number", 399}}});
  host.route("/repos/acme/lib/pulls?page=1&per_page=100&state=closed", page1.dump());
  host.route("/repos/acme/lib/pulls?page=2&per_page=100&state=closed", page2.dump());
  CodeHostClient client(host.config());
  EXPECT_EQ(client.list_closed_prs("acme/lib", 1000).size(), 102u);
  const auto few = client.list_closed_prs("acme/lib", 3);
  EXPECT_EQ(few, (std::vector<std::int64_t>{500, 499, 498}));
}

}  // namespace
}  // namespace sphinx::ingest

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


#include "sphinx/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <map>

#include "sphinx/core/error.hpp"
#include "sphinx/core/serialize.hpp"

namespace sphinx::cli {
namespace {

using nlohmann::json;

class TomlParser {
 public:
  explicit TomlParser(std::string_view text) : text_(text) {}

  json parse() {
    json doc = json::object();
    doc[""] = json::object();
    json* section = &doc[""];
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        skip_spaces();
        const std::string name = key();
        skip_spaces();
        expect(']');
        if (doc.contains(name)) fail("duplicate section [" + name + "]");
        doc[name] = json::object();
        section = &doc[name];
      } else {
        const std::string k = key();
        skip_spaces();
        expect('=');
        skip_spaces();
        if (section->contains(k)) fail("duplicate key '" + k + "'");
        (*section)[k] = value();
      }
      end_of_line();
    }
    return doc;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) line += text_[i] == '\n';
    throw ParseError(pos_, "config line " + std::to_string(line) + ": " + what);
  }

  void expect(char ch) {
    if (peek() != ch) fail(std::string("expected '") + ch + "'");
    ++pos_;
  }

  void skip_spaces() {
    while (peek() == ' ' || peek() == '\t') ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  void skip_blank_lines() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r' || peek() == '\n') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void skip_array_space() {
    while (!at_end()) {
      const char ch = peek();
      if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
        ++pos_;
      } else if (ch == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (!at_end() && peek() != '\n') fail("unexpected trailing characters");
  }

  std::string key() {
    if (peek() == '"') return basic_string();
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    if (peek() == '.') fail("dotted keys are not supported");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char ch = text_[pos_++];
      if (ch == '"') return out;
      if (ch != '\\') {
        out.push_back(ch);
        continue;
      }
      if (at_end()) fail("unterminated escape");
      switch (text_[pos_++]) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        default: fail("unsupported escape");
      }
    }
  }

  std::string literal_string() {
    expect('\'');
    const std::size_t start = pos_;
    while (!at_end() && peek() != '\'' && peek() != '\n') ++pos_;
    if (peek() != '\'') fail("unterminated string");
    std::string out(text_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  json scalar_token() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                         peek() == '-' || peek() == '.' || peek() == '_')) {
      ++pos_;
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token == "true") return true;
    if (token == "false") return false;
    std::erase(token, '_');
    if (token.empty()) fail("expected a value");
    const char* first = token.data() + (token.front() == '+' ? 1 : 0);
    const char* last = token.data() + token.size();
    if (token.find_first_of(".eE") == std::string::npos) {
      std::int64_t v = 0;
      const auto [p, ec] = std::from_chars(first, last, v);
      if (ec == std::errc() && p == last) return v;
    } else {
      double v = 0.0;
      const auto [p, ec] = std::from_chars(first, last, v);
      if (ec == std::errc() && p == last) return v;
    }
    pos_ = start;
    fail("bad value '" + token + "'");
  }

  json value() {
    switch (peek()) {
      case '"': return basic_string();
      case '\'': return literal_string();
      case '[': {
        ++pos_;
        json arr = json::array();
        skip_array_space();
        while (peek() != ']') {
          if (peek() == '[') fail("nested arrays are not supported");
          arr.push_back(value());
          skip_array_space();
          if (peek() == ',') {
            ++pos_;
            skip_array_space();
          } else if (peek() != ']') {
            fail("expected ',' or ']'");
          }
        }
        ++pos_;
        return arr;
      }
      case '{': fail("inline tables are not supported");
      default: return scalar_token();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, where + ": " + what);
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where, "expected a string");
  return v.get<std::string>();
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad(where, "expected an integer");
  return v.get<std::int64_t>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where, "expected a number");
  return v.get<double>();
}

std::vector<std::string> as_strings(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : v) out.push_back(as_string(item, where));
  return out;
}

std::set<Language> as_languages(const json& v, const std::string& where) {
  std::set<Language> out;
  for (const auto& name : as_strings(v, where)) {
    const auto lang = language_from_string(name);
    if (!lang) bad(where, "unknown language '" + name + "'");
    out.insert(*lang);
  }
  return out;
}

std::optional<llm::GatewayMode> gateway_mode_from_string(std::string_view name) {
  for (const auto m : {llm::GatewayMode::kLive, llm::GatewayMode::kRecord, llm::GatewayMode::kReplay,
                       llm::GatewayMode::kStrictReplay}) {
    if (name == llm::to_string(m)) return m;
  }
  return std::nullopt;
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;
using SectionTable = std::map<std::string, Setter>;

const std::map<std::string, SectionTable>& setters() {
  static const std::map<std::string, SectionTable> table = {
      {"",
       {
           {"jobs", [](RunConfig& c, const json& v, const std::string& w) { c.jobs = static_cast<int>(as_int(v, w)); }},
       }},
      {"ingest",
       {
           {"repos", [](RunConfig& c, const json& v, const std::string& w) { c.ingest.repos = as_strings(v, w); }},
           {"languages", [](RunConfig& c, const json& v, const std::string& w) { c.ingest.languages = as_languages(v, w); }},
           {"max_prs", [](RunConfig& c, const json& v, const std::string& w) { c.ingest.max_prs = as_int(v, w); }},
           {"base_url", [](RunConfig& c, const json& v, const std::string& w) { c.code_host_url = as_string(v, w); }},
       }},
      {"filter",
       {
           {"token_limit", [](RunConfig& c, const json& v, const std::string& w) { c.ingest.token_limit = as_int(v, w); }},
           {"token_strategy",
            [](RunConfig& c, const json& v, const std::string& w) {
              const auto s = token_strategy_from_string(as_string(v, w));
              if (!s) bad(w, "unknown token strategy");
              c.ingest.token_strategy = *s;
            }},
       }},
      {"synthesis",
       {
           {"generator_model", [](RunConfig& c, const json& v, const std::string& w) { c.generator_model = as_string(v, w); }},
       }},
      {"benchmark",
       {
           {"per_language_total", [](RunConfig& c, const json& v, const std::string& w) { c.benchmark.per_language_total = as_int(v, w); }},
           {"buggy_quota", [](RunConfig& c, const json& v, const std::string& w) { c.benchmark.buggy_quota = as_int(v, w); }},
           {"bugfree_quota", [](RunConfig& c, const json& v, const std::string& w) { c.benchmark.bugfree_quota = as_int(v, w); }},
           {"seed",
            [](RunConfig& c, const json& v, const std::string& w) {
              const auto s = as_int(v, w);
              if (s < 0) bad(w, "seed must be non-negative");
              c.benchmark.seed = static_cast<std::uint64_t>(s);
            }},
           {"languages", [](RunConfig& c, const json& v, const std::string& w) { c.benchmark.languages = as_languages(v, w); }},
           {"classifier_model", [](RunConfig& c, const json& v, const std::string& w) { c.classifier_model = as_string(v, w); }},
       }},
      {"eval",
       {
           {"lambda", [](RunConfig& c, const json& v, const std::string& w) { c.eval.lambda = as_double(v, w); }},
           {"judge_model", [](RunConfig& c, const json& v, const std::string& w) { c.eval.judge_model_id = as_string(v, w); }},
           {"candidate_model", [](RunConfig& c, const json& v, const std::string& w) { c.eval.candidate_model_id = as_string(v, w); }},
           {"model_name", [](RunConfig& c, const json& v, const std::string& w) { c.model_name = as_string(v, w); }},
       }},
      {"reward",
       {
           {"safe_multiple", [](RunConfig& c, const json& v, const std::string& w) { c.reward.penalty.safe_multiple = as_double(v, w); }},
           {"floor_multiple", [](RunConfig& c, const json& v, const std::string& w) { c.reward.penalty.floor_multiple = as_double(v, w); }},
           {"gamma_min", [](RunConfig& c, const json& v, const std::string& w) { c.reward.penalty.gamma_min = as_double(v, w); }},
           {"length_mode",
            [](RunConfig& c, const json& v, const std::string& w) {
              const auto m = reward::length_mode_from_string(as_string(v, w));
              if (!m) bad(w, "unknown length mode");
              c.reward.penalty.length_mode = *m;
            }},
           {"judge_model", [](RunConfig& c, const json& v, const std::string& w) { c.reward.judge_model_id = as_string(v, w); }},
           {"bind", [](RunConfig& c, const json& v, const std::string& w) { c.reward_bind = as_string(v, w); }},
           {"max_batch",
            [](RunConfig& c, const json& v, const std::string& w) {
              const auto n = as_int(v, w);
              if (n < 1) bad(w, "max_batch must be positive");
              c.reward.max_batch = static_cast<std::size_t>(n);
            }},
       }},
      {"gateway",
       {
           {"mode",
            [](RunConfig& c, const json& v, const std::string& w) {
              const auto m = gateway_mode_from_string(as_string(v, w));
              if (!m) bad(w, "mode must be live, record, replay or strict-replay");
              c.gateway.mode = *m;
            }},
           {"cache_dir", [](RunConfig& c, const json& v, const std::string& w) { c.gateway.cache_dir = as_string(v, w); }},
           {"max_attempts", [](RunConfig& c, const json& v, const std::string& w) { c.gateway.max_attempts = static_cast<int>(as_int(v, w)); }},
           {"max_in_flight", [](RunConfig& c, const json& v, const std::string& w) { c.gateway.max_in_flight = static_cast<int>(as_int(v, w)); }},
           {"temperature", [](RunConfig& c, const json& v, const std::string& w) { c.temperature = as_double(v, w); }},
           {"safety_model", [](RunConfig& c, const json& v, const std::string& w) { c.safety_model = as_string(v, w); }},
           {"prompts_dir", [](RunConfig& c, const json& v, const std::string& w) { c.prompts_dir = as_string(v, w); }},
           {"base_url", [](RunConfig& c, const json& v, const std::string& w) { c.llm_base_url = as_string(v, w); }},
           {"endpoint", [](RunConfig& c, const json& v, const std::string& w) { c.llm_endpoint = as_string(v, w); }},
           {"timeout_seconds", [](RunConfig& c, const json& v, const std::string& w) { c.llm_timeout_seconds = static_cast<int>(as_int(v, w)); }},
       }},
  };
  return table;
}

void validate(const RunConfig& c) {
  c.ingest.validate();
  c.benchmark.validate();
  c.eval.validate();
  c.reward.penalty.validate();
  if (c.gateway.max_attempts < 1) bad("gateway.max_attempts", "must be >= 1");
  if (c.gateway.max_in_flight < 1) bad("gateway.max_in_flight", "must be >= 1");
  if (c.llm_timeout_seconds < 1) bad("gateway.timeout_seconds", "must be >= 1");
  if (c.temperature < 0.0) bad("gateway.temperature", "must be >= 0");
  if (c.jobs < 0) bad("jobs", "must be >= 0");
}

}  // namespace

json parse_config_text(std::string_view text) { return TomlParser(text).parse(); }

llm::ModelRoles RunConfig::model_roles() const {
  llm::ModelRoles roles;
  roles.generator = generator_model;
  roles.judge = eval.judge_model_id;
  roles.safety = safety_model;
  roles.classifier = classifier_model;
  roles.candidate = eval.candidate_model_id;
  roles.temperature = temperature;
  return roles;
}

RunConfig resolve_config(const json& document, RunConfig base) {
  if (!document.is_object()) bad("config", "expected a table document");
  const auto& table = setters();
  for (const auto& [section, keys] : document.items()) {
    const auto sec = table.find(section);
    if (sec == table.end()) bad("config", "unknown section [" + section + "]");
    for (const auto& [k, v] : keys.items()) {
      const std::string where = section.empty() ? k : section + "." + k;
      const auto setter = sec->second.find(k);
      if (setter == sec->second.end()) bad(where, "unknown key");
      setter->second(base, v, where);
    }
  }
  validate(base);
  return base;
}

RunConfig load_config(const std::filesystem::path& path) {
  return resolve_config(parse_config_text(read_file(path)));
}

json to_json(const RunConfig& c) {
  json langs = json::array();
  for (const auto l : c.ingest.languages) langs.push_back(std::string(to_string(l)));
  json bench_langs = json::array();
  for (const auto l : c.benchmark.languages) bench_langs.push_back(std::string(to_string(l)));
  return {
      {"jobs", c.jobs},
      {"ingest",
       {{"repos", c.ingest.repos}, {"languages", langs}, {"max_prs", c.ingest.max_prs}, {"base_url", c.code_host_url}}},
      {"filter",
       {{"token_limit", c.ingest.token_limit},
        {"token_strategy", std::string(to_string(c.ingest.token_strategy))}}},
      {"synthesis", {{"generator_model", c.generator_model}}},
      {"benchmark",
       {{"per_language_total", c.benchmark.per_language_total},
        {"buggy_quota", c.benchmark.buggy_quota},
        {"bugfree_quota", c.benchmark.bugfree_quota},
        {"seed", c.benchmark.seed},
        {"languages", bench_langs},
        {"classifier_model", c.classifier_model}}},
      {"eval",
       {{"lambda", c.eval.lambda},
        {"judge_model", c.eval.judge_model_id},
        {"candidate_model", c.eval.candidate_model_id},
        {"model_name", c.model_name}}},
      {"reward",
       {{"safe_multiple", c.reward.penalty.safe_multiple},
        {"floor_multiple", c.reward.penalty.floor_multiple},
        {"gamma_min", c.reward.penalty.gamma_min},
        {"length_mode", std::string(reward::to_string(c.reward.penalty.length_mode))},
        {"judge_model", c.reward.judge_model_id},
        {"bind", c.reward_bind},
        {"max_batch", c.reward.max_batch}}},
      {"gateway",
       {{"mode", std::string(llm::to_string(c.gateway.mode))},
        {"cache_dir", c.gateway.cache_dir.string()},
        {"max_attempts", c.gateway.max_attempts},
        {"max_in_flight", c.gateway.max_in_flight},
        {"temperature", c.temperature},
        {"safety_model", c.safety_model},
        {"prompts_dir", c.prompts_dir},
        {"base_url", c.llm_base_url},
        {"endpoint", c.llm_endpoint},
        {"timeout_seconds", c.llm_timeout_seconds}}},
  };
}

std::string config_hash(const RunConfig& config) { return llm::sha256_hex(dump_line(to_json(config))); }

}  // namespace sphinx::cli

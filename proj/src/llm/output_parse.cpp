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

#include "sphinx/llm/output_parse.hpp"

#include <limits>

#include "sphinx/core/error.hpp"
#include "sphinx/core/text.hpp"

namespace sphinx::llm {
namespace {

using json = nlohmann::json;

// End (exclusive) of the bracketed value starting at `open`, honouring JSON
// string escapes; npos when unbalanced.
std::size_t balanced_end(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      if (ch == '\\') {
        ++i;
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') {
      in_string = true;
    } else if (ch == '[' || ch == '{') {
      ++depth;
    } else if (ch == ']' || ch == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

bool is_string_array(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& v : j) {
    if (!v.is_string()) return false;
  }
  return true;
}

std::optional<std::vector<std::string>> list_in(std::string_view text) {
  if (auto j = find_json(text, is_string_array)) return j->get<std::vector<std::string>>();
  auto items = list_items(text);
  if (!items.empty()) return items;
  return std::nullopt;
}

}  // namespace

std::vector<std::string> fenced_blocks(std::string_view text) {
  std::vector<std::string> blocks;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    std::size_t body = text.find('\n', open + 3);
    if (body == std::string_view::npos) break;
    ++body;
    std::size_t close = text.find("```", body);
    if (close == std::string_view::npos) {
      blocks.emplace_back(text.substr(body));
      break;
    }
    std::string_view content = text.substr(body, close - body);
    if (!content.empty() && content.back() == '\n') content.remove_suffix(1);
    if (!content.empty() && content.back() == '\r') content.remove_suffix(1);
    blocks.emplace_back(content);
    pos = close + 3;
  }
  return blocks;
}

std::optional<json> find_json(std::string_view text, const std::function<bool(const json&)>& accept) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '[' && text[i] != '{') continue;
    const std::size_t end = balanced_end(text, i);
    if (end == std::string_view::npos) continue;
    const std::string_view candidate = text.substr(i, end - i);
    json parsed = json::parse(candidate.begin(), candidate.end(), nullptr, false);
    if (!parsed.is_discarded() && accept(parsed)) return parsed;
  }
  return std::nullopt;
}

std::vector<std::string> parse_list_output(std::string_view text) {
  for (const auto& block : fenced_blocks(text)) {
    if (auto items = list_in(block)) return *items;
  }
  if (auto items = list_in(text)) return *items;
  throw Error(ErrorCode::kNoListFound, "completion contains no list");
}

std::int64_t parse_single_integer(std::string_view text) {
  const std::string_view t = trim_view(text);
  std::size_t i = 0;
  bool negative = false;
  if (i < t.size() && (t[i] == '-' || t[i] == '+')) {
    negative = t[i] == '-';
    ++i;
  }
  if (i == t.size()) throw Error(ErrorCode::kNotANumber, "'" + std::string(t) + "'");
  std::int64_t value = 0;
  for (; i < t.size(); ++i) {
    const char ch = t[i];
    if (ch < '0' || ch > '9') throw Error(ErrorCode::kNotANumber, "'" + std::string(t) + "'");
    if (value > (std::numeric_limits<std::int64_t>::max() - (ch - '0')) / 10) {
      throw Error(ErrorCode::kNotANumber, "integer overflow");
    }
    value = value * 10 + (ch - '0');
  }
  return negative ? -value : value;
}

}  // namespace sphinx::llm

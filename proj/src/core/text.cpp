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

#include "sphinx/core/text.hpp"

#include <cctype>

namespace sphinx {
namespace {

bool is_space(char ch) {
  return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
}

bool is_digit(char ch) { return ch >= '0' && ch <= '9'; }

enum class Marker { kNone, kNumbered, kBullet };

// Returns the marker kind of `line` and sets `body` to the text after it.
Marker classify_line(std::string_view line, std::string_view& body) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  const std::size_t start = i;

  std::size_t digits = 0;
  while (i < line.size() && is_digit(line[i]) && digits < 4) {
    ++i;
    ++digits;
  }
  if (digits > 0 && digits <= 3 && i + 1 < line.size() && (line[i] == '.' || line[i] == ')') &&
      (line[i + 1] == ' ' || line[i + 1] == '\t')) {
    body = trim_view(line.substr(i + 1));
    return body.empty() ? Marker::kNone : Marker::kNumbered;
  }

  i = start;
  std::size_t marker_len = 0;
  if (i < line.size() && (line[i] == '-' || line[i] == '*' || line[i] == '+')) {
    marker_len = 1;
  } else if (line.substr(i, 3) == "\xE2\x80\xA2") {  // U+2022 bullet
    marker_len = 3;
  }
  if (marker_len > 0 && i + marker_len < line.size() &&
      (line[i + marker_len] == ' ' || line[i + marker_len] == '\t')) {
    body = trim_view(line.substr(i + marker_len));
    return body.empty() ? Marker::kNone : Marker::kBullet;
  }
  return Marker::kNone;
}

std::vector<std::string> collect_marked(const std::vector<std::string_view>& lines, Marker mode) {
  std::vector<std::string> items;
  bool open = false;
  for (std::string_view line : lines) {
    std::string_view body;
    const Marker m = classify_line(line, body);
    if (m == mode) {
      items.emplace_back(body);
      open = true;
      continue;
    }
    const std::string_view rest = trim_view(line);
    if (!open || rest.empty()) continue;
    items.back().push_back(' ');
    items.back().append(rest);
  }
  return items;
}

}  // namespace

std::string_view trim_view(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return text.substr(b, e - b);
}

std::string trim(std::string_view text) { return std::string(trim_view(text)); }

std::string normalize_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

bool starts_with_icase(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::optional<TokenStrategy> token_strategy_from_string(std::string_view name) {
  if (name == "bytes4" || name == "bytes_per_four") return TokenStrategy::kBytesPerFour;
  if (name == "whitespace") return TokenStrategy::kWhitespace;
  return std::nullopt;
}

std::string_view to_string(TokenStrategy strategy) {
  return strategy == TokenStrategy::kWhitespace ? "whitespace" : "bytes4";
}

std::size_t TokenEstimator::operator()(std::string_view text) const {
  switch (strategy_) {
    case TokenStrategy::kBytesPerFour:
      return (text.size() + 3) / 4;
    case TokenStrategy::kWhitespace: {
      std::size_t words = 0;
      bool in_word = false;
      for (char ch : text) {
        if (is_space(ch)) {
          in_word = false;
        } else if (!in_word) {
          in_word = true;
          ++words;
        }
      }
      return words;
    }
  }
  return 0;
}

std::size_t estimate_tokens(std::string_view text) { return TokenEstimator{}(text); }

std::vector<std::string> list_items(std::string_view text) {
  const std::string normalized = normalize_newlines(text);
  const auto lines = split_lines(trim_view(normalized));
  bool any_numbered = false;
  bool any_bullet = false;
  for (std::string_view line : lines) {
    std::string_view ignored;
    switch (classify_line(line, ignored)) {
      case Marker::kNumbered: any_numbered = true; break;
      case Marker::kBullet: any_bullet = true; break;
      case Marker::kNone: break;
    }
  }
  if (any_numbered) return collect_marked(lines, Marker::kNumbered);
  if (any_bullet) return collect_marked(lines, Marker::kBullet);
  return {};
}

std::vector<std::string> segment_items(std::string_view review_text) {
  const std::string normalized = normalize_newlines(review_text);
  const std::string_view body = trim_view(normalized);
  if (body.empty()) return {};

  if (auto items = list_items(body); !items.empty()) return items;

  std::vector<std::string> paragraphs;
  const auto lines = split_lines(body);
  std::string current;
  for (std::string_view line : lines) {
    const std::string_view t = trim_view(line);
    if (t.empty()) {
      if (!current.empty()) paragraphs.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (!current.empty()) current.push_back(' ');
    current.append(t);
  }
  if (!current.empty()) paragraphs.push_back(std::move(current));
  return paragraphs;
}

}  // namespace sphinx

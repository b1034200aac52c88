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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sphinx {

std::string_view trim_view(std::string_view text);
std::string trim(std::string_view text);
/// CRLF and lone CR become LF.
std::string normalize_newlines(std::string_view text);
std::vector<std::string_view> split_lines(std::string_view text);
bool starts_with_icase(std::string_view text, std::string_view prefix);

enum class TokenStrategy {
  kBytesPerFour,  // ceil(byte_length / 4)
  kWhitespace,    // count of whitespace-separated words
};

std::optional<TokenStrategy> token_strategy_from_string(std::string_view name);
std::string_view to_string(TokenStrategy strategy);

/// Deterministic token-count estimate. Every strategy is monotone under
/// prefix extension.
class TokenEstimator {
 public:
  explicit TokenEstimator(TokenStrategy strategy = TokenStrategy::kBytesPerFour)
      : strategy_(strategy) {}

  std::size_t operator()(std::string_view text) const;
  TokenStrategy strategy() const noexcept { return strategy_; }

 private:
  TokenStrategy strategy_;
};

/// Default-strategy estimate, ceil(bytes / 4).
std::size_t estimate_tokens(std::string_view text);

/// Entries of a numbered list, or of a bulleted list when no numbered entry
/// exists. Empty when the text carries no list markers.
std::vector<std::string> list_items(std::string_view text);

/// Splits a review into discrete comment items. Numbered entries win over
/// bullet entries, which win over blank-line-separated paragraphs. In the
/// list modes, text before the first marker is dropped and unmarked lines
/// continue the current item. Blank input yields an empty list.
std::vector<std::string> segment_items(std::string_view review_text);

}  // namespace sphinx

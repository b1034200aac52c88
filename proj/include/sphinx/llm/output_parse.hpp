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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sphinx::llm {

/// Bodies of ``` fenced blocks, in order of appearance. The info string after
/// the opening fence is dropped. An unterminated fence runs to end of text.
std::vector<std::string> fenced_blocks(std::string_view text);

/// First JSON value embedded in `text` (starting at a '[' or '{') that parses
/// and satisfies `accept`.
std::optional<nlohmann::json> find_json(std::string_view text,
                                        const std::function<bool(const nlohmann::json&)>& accept);

/// First well-formed list of strings in a completion. Fenced blocks are
/// searched before the surrounding text; a JSON array of strings wins over a
/// numbered or bulleted plain list. Throws NO_LIST_FOUND.
std::vector<std::string> parse_list_output(std::string_view text);

/// The sole base-10 integer token of `text` after trimming, optionally signed.
/// Throws NOT_A_NUMBER on anything else.
std::int64_t parse_single_integer(std::string_view text);

}  // namespace sphinx::llm

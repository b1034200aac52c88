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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphinx/core/types.hpp"

namespace sphinx {

using json = nlohmann::json;

// JSON mapping. Field names are the snake_case domain names. The *_from_json
// functions throw ParseError on missing or mistyped fields.
json to_json(const PullRequestRecord& record);
json to_json(const ReviewInstruction& instruction);
json to_json(const Checklist& checklist);
json to_json(const SphinxCase& c);
json to_json(const CaseJudgement& j);

PullRequestRecord record_from_json(const json& j);
ReviewInstruction instruction_from_json(const json& j);
Checklist checklist_from_json(const json& j);
SphinxCase case_from_json(const json& j);
CaseJudgement judgement_from_json(const json& j);

/// Compact single-line JSON, keys sorted, invalid UTF-8 replaced.
std::string dump_line(const json& j);

/// Parses one JSON text; ParseError carries the byte offset of the failure.
json parse_json(std::string_view text);

std::string serialize_case(const SphinxCase& c);
/// ParseError on malformed or incomplete JSON, INVARIANT_ERROR when the
/// content parses but breaks a case invariant.
SphinxCase parse_case(std::string_view line);

std::string serialize_record(const PullRequestRecord& record);
PullRequestRecord parse_record(std::string_view line);

// JSON-lines files. Blank lines are skipped on read.
std::vector<std::string> read_lines(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows);

std::vector<PullRequestRecord> load_records(const std::filesystem::path& path);
/// Rejects duplicate case ids with DUPLICATE_CASE_ID.
std::vector<SphinxCase> load_cases(const std::filesystem::path& path);
void save_cases(const std::filesystem::path& path, const std::vector<SphinxCase>& cases);
void save_records(const std::filesystem::path& path, const std::vector<PullRequestRecord>& records);

}  // namespace sphinx

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

#include "sphinx/core/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sphinx/core/error.hpp"

namespace sphinx {
namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw ParseError(0, "expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError(0, std::string("missing required field '") + name + "'");
  return *it;
}

std::string get_string(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) throw ParseError(0, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::int64_t get_int(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) {
    throw ParseError(0, std::string("field '") + name + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

bool get_bool(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_boolean()) throw ParseError(0, std::string("field '") + name + "' must be a boolean");
  return v.get<bool>();
}

const json& get_array(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_array()) throw ParseError(0, std::string("field '") + name + "' must be an array");
  return v;
}

}  // namespace

json to_json(const PullRequestRecord& r) {
  json issues = json::array();
  for (const auto& issue : r.linked_issues) issues.push_back({{"id", issue.id}, {"body", issue.body}});
  return {
      {"repo_id", r.repo_id},
      {"pr_number", r.pr_number},
      {"language", std::string(to_string(r.language))},
      {"title", r.title},
      {"description", r.description},
      {"linked_issues", std::move(issues)},
      {"gt_diff", r.gt_diff},
      {"original_code", r.original_code},
      {"merged_code", r.merged_code},
      {"merged", r.merged},
      {"file_count", r.file_count},
  };
}

json to_json(const ReviewInstruction& instruction) {
  json edits = json::array();
  for (const auto& e : instruction.edits) {
    edits.push_back({{"modification_target", e.modification_target},
                     {"modification_logic", e.modification_logic}});
  }
  return {{"problem_definition", instruction.problem_definition}, {"edits", std::move(edits)}};
}

json to_json(const Checklist& checklist) {
  return {{"items", checklist.items()}, {"is_no_comment", checklist.is_no_comment()}};
}

json to_json(const SphinxCase& c) {
  return {
      {"record", to_json(c.record)},
      {"instruction", to_json(c.instruction)},
      {"pseudo_solution", c.pseudo_solution},
      {"review", c.review},
      {"checklist", to_json(c.checklist)},
      {"buggy", c.buggy},
      {"category", std::string(to_string(c.category))},
  };
}

json to_json(const CaseJudgement& j) {
  return {{"case_id", j.case_id},
          {"covered_count", j.covered_count},
          {"checklist_size", j.checklist_size},
          {"buggy", j.buggy}};
}

PullRequestRecord record_from_json(const json& j) {
  PullRequestRecord r;
  r.repo_id = get_string(j, "repo_id");
  r.pr_number = get_int(j, "pr_number");
  const std::string lang = get_string(j, "language");
  const auto language = language_from_string(lang);
  if (!language) throw ParseError(0, "unsupported language '" + lang + "'");
  r.language = *language;
  r.title = get_string(j, "title");
  r.description = get_string(j, "description");
  for (const json& issue : get_array(j, "linked_issues")) {
    r.linked_issues.push_back({get_string(issue, "id"), get_string(issue, "body")});
  }
  r.gt_diff = get_string(j, "gt_diff");
  r.original_code = get_string(j, "original_code");
  r.merged_code = get_string(j, "merged_code");
  r.merged = get_bool(j, "merged");
  r.file_count = get_int(j, "file_count");
  return r;
}

ReviewInstruction instruction_from_json(const json& j) {
  ReviewInstruction instruction;
  instruction.problem_definition = get_string(j, "problem_definition");
  for (const json& e : get_array(j, "edits")) {
    instruction.edits.push_back(
        {get_string(e, "modification_target"), get_string(e, "modification_logic")});
  }
  return instruction;
}

Checklist checklist_from_json(const json& j) {
  std::vector<std::string> items;
  for (const json& item : get_array(j, "items")) {
    if (!item.is_string()) throw ParseError(0, "checklist items must be strings");
    items.push_back(item.get<std::string>());
  }
  const bool is_no_comment = get_bool(j, "is_no_comment");
  Checklist checklist = Checklist::from_items(std::move(items));
  if (checklist.is_no_comment() != is_no_comment) {
    throw Error(ErrorCode::kInvariantError, "is_no_comment disagrees with checklist items");
  }
  return checklist;
}

SphinxCase case_from_json(const json& j) {
  SphinxCase c;
  c.record = record_from_json(field(j, "record"));
  c.instruction = instruction_from_json(field(j, "instruction"));
  c.pseudo_solution = get_string(j, "pseudo_solution");
  c.review = get_string(j, "review");
  c.checklist = checklist_from_json(field(j, "checklist"));
  c.buggy = get_bool(j, "buggy");
  const std::string cat = get_string(j, "category");
  const auto category = category_from_string(cat);
  if (!category) throw ParseError(0, "unknown category '" + cat + "'");
  c.category = *category;
  return c;
}

CaseJudgement judgement_from_json(const json& j) {
  CaseJudgement out;
  out.case_id = get_string(j, "case_id");
  out.covered_count = get_int(j, "covered_count");
  out.checklist_size = get_int(j, "checklist_size");
  out.buggy = get_bool(j, "buggy");
  check_judgement_invariants(out);
  return out;
}

std::string dump_line(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
}

std::string serialize_case(const SphinxCase& c) {
  check_case_invariants(c);
  return dump_line(to_json(c));
}

SphinxCase parse_case(std::string_view line) {
  SphinxCase c = case_from_json(parse_json(line));
  check_case_invariants(c);
  return c;
}

std::string serialize_record(const PullRequestRecord& record) { return dump_line(to_json(record)); }

PullRequestRecord parse_record(std::string_view line) { return record_from_json(parse_json(line)); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows) {
  std::string buf;
  for (const auto& row : rows) {
    buf += dump_line(row);
    buf.push_back('\n');
  }
  write_file(path, buf);
}

std::vector<PullRequestRecord> load_records(const std::filesystem::path& path) {
  std::vector<PullRequestRecord> records;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    try {
      records.push_back(parse_record(line));
    } catch (const ParseError& e) {
      throw ParseError(e.byte_offset(), path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

std::vector<SphinxCase> load_cases(const std::filesystem::path& path) {
  std::vector<SphinxCase> cases;
  std::set<std::string> seen;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    try {
      cases.push_back(parse_case(line));
    } catch (const ParseError& e) {
      throw ParseError(e.byte_offset(), path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!seen.insert(cases.back().id()).second) {
      throw Error(ErrorCode::kDuplicateCaseId, cases.back().id() + " in " + path.string());
    }
  }
  return cases;
}

void save_cases(const std::filesystem::path& path, const std::vector<SphinxCase>& cases) {
  std::string buf;
  for (const auto& c : cases) {
    buf += serialize_case(c);
    buf.push_back('\n');
  }
  write_file(path, buf);
}

void save_records(const std::filesystem::path& path, const std::vector<PullRequestRecord>& records) {
  std::string buf;
  for (const auto& r : records) {
    buf += serialize_record(r);
    buf.push_back('\n');
  }
  write_file(path, buf);
}

}  // namespace sphinx

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

#include "sphinx/llm/prompt_template.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "sphinx/core/error.hpp"
#include "sphinx/core/serialize.hpp"
#include "sphinx/core/text.hpp"

#ifndef SPHINX_DEFAULT_PROMPTS_DIR
#define SPHINX_DEFAULT_PROMPTS_DIR "prompts"
#endif

namespace sphinx::llm {
namespace {

bool ident_start(char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_';
}
bool ident_char(char ch) { return ident_start(ch) || (ch >= '0' && ch <= '9'); }

// If body[pos] opens a `{identifier}` slot, returns the identifier length.
std::size_t slot_length(std::string_view body, std::size_t pos) {
  if (pos + 1 >= body.size() || !ident_start(body[pos + 1])) return 0;
  std::size_t i = pos + 1;
  while (i < body.size() && ident_char(body[i])) ++i;
  if (i >= body.size() || body[i] != '}') return 0;
  return i - pos - 1;
}

// Walks the body, calling on_text for literal runs and on_slot for slots.
template <typename OnText, typename OnSlot>
void walk(std::string_view body, OnText&& on_text, OnSlot&& on_slot) {
  std::size_t i = 0;
  std::size_t run = 0;
  while (i < body.size()) {
    const char ch = body[i];
    if ((ch == '{' || ch == '}') && i + 1 < body.size() && body[i + 1] == ch) {
      on_text(body.substr(run, i - run + 1));
      i += 2;
      run = i;
      continue;
    }
    if (ch == '{') {
      if (const std::size_t n = slot_length(body, i); n > 0) {
        on_text(body.substr(run, i - run));
        on_slot(std::string(body.substr(i + 1, n)));
        i += n + 2;
        run = i;
        continue;
      }
    }
    ++i;
  }
  on_text(body.substr(run));
}

std::set<std::string> parse_slot_list(std::string_view value) {
  std::set<std::string> slots;
  std::string_view v = trim_view(value);
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::size_t pos = 0;
  while (pos <= v.size()) {
    std::size_t comma = v.find(',', pos);
    if (comma == std::string_view::npos) comma = v.size();
    const std::string_view name = trim_view(v.substr(pos, comma - pos));
    if (!name.empty()) slots.emplace(name);
    pos = comma + 1;
  }
  return slots;
}

void check_slots(const PromptTemplate& t) {
  const auto in_body = scan_slots(t.body);
  for (const auto& s : in_body) {
    if (!t.required_slots.count(s)) {
      throw Error(ErrorCode::kTemplateError,
                  t.template_id + ": placeholder {" + s + "} not declared in required_slots");
    }
  }
  for (const auto& s : t.required_slots) {
    if (!in_body.count(s)) {
      throw Error(ErrorCode::kTemplateError,
                  t.template_id + ": declared slot '" + s + "' never used in body");
    }
  }
}

}  // namespace

std::set<std::string> scan_slots(std::string_view body) {
  std::set<std::string> slots;
  walk(body, [](std::string_view) {}, [&](std::string name) { slots.insert(std::move(name)); });
  return slots;
}

PromptTemplate make_template(std::string template_id, std::string body, std::string provenance) {
  PromptTemplate t;
  t.template_id = std::move(template_id);
  t.provenance = std::move(provenance);
  t.required_slots = scan_slots(body);
  t.body = std::move(body);
  return t;
}

PromptTemplate parse_template(std::string_view raw) {
  const std::string text = normalize_newlines(raw);
  std::string_view view(text);
  if (view.substr(0, 4) != "---\n") {
    throw Error(ErrorCode::kTemplateError, "template must start with a '---' header line");
  }
  const std::size_t close = view.find("\n---\n", 3);
  if (close == std::string_view::npos) {
    throw Error(ErrorCode::kTemplateError, "unterminated template header");
  }
  PromptTemplate t;
  bool have_slots = false;
  for (std::string_view line : split_lines(view.substr(4, close - 4))) {
    if (trim_view(line).empty() || trim_view(line).front() == '#') continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kTemplateError, "bad header line '" + std::string(line) + "'");
    }
    const std::string key = trim(line.substr(0, colon));
    const std::string_view value = trim_view(line.substr(colon + 1));
    if (key == "template_id") {
      t.template_id = std::string(value);
    } else if (key == "version") {
      t.version = std::string(value);
    } else if (key == "provenance") {
      t.provenance = std::string(value);
    } else if (key == "required_slots") {
      t.required_slots = parse_slot_list(value);
      have_slots = true;
    }
  }
  if (t.template_id.empty()) throw Error(ErrorCode::kTemplateError, "header lacks template_id");
  if (!have_slots) {
    throw Error(ErrorCode::kTemplateError, t.template_id + ": header lacks required_slots");
  }
  std::string_view body = view.substr(close + 5);
  if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
  t.body = std::string(body);
  check_slots(t);
  return t;
}

PromptTemplate load_template(const std::filesystem::path& path) {
  return parse_template(read_file(path));
}

std::string render_prompt(const PromptTemplate& tmpl, const Bindings& bindings) {
  for (const auto& slot : tmpl.required_slots) {
    if (!bindings.count(slot)) throw Error(ErrorCode::kMissingSlot, slot);
  }
  for (const auto& [name, value] : bindings) {
    if (!tmpl.required_slots.count(name)) throw Error(ErrorCode::kExtraSlot, name);
  }
  std::string out;
  out.reserve(tmpl.body.size());
  walk(
      tmpl.body, [&](std::string_view literal) { out.append(literal); },
      [&](const std::string& name) { out.append(bindings.at(name)); });
  return out;
}

TemplateLibrary::TemplateLibrary(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "prompt directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tmpl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) add(load_template(f));
}

void TemplateLibrary::add(PromptTemplate tmpl) {
  const std::string id = tmpl.template_id;
  if (!templates_.emplace(id, std::move(tmpl)).second) {
    throw Error(ErrorCode::kTemplateError, "duplicate template_id " + id);
  }
}

const PromptTemplate& TemplateLibrary::get(const std::string& template_id) const {
  const auto it = templates_.find(template_id);
  if (it == templates_.end()) throw Error(ErrorCode::kTemplateError, "unknown template " + template_id);
  return it->second;
}

bool TemplateLibrary::contains(const std::string& template_id) const {
  return templates_.count(template_id) > 0;
}

std::filesystem::path default_prompts_dir() {
  if (const char* env = std::getenv("SPHINX_PROMPTS_DIR"); env && *env) return env;
  return SPHINX_DEFAULT_PROMPTS_DIR;
}

}  // namespace sphinx::llm

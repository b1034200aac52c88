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

#include "sphinx/llm/prompt_runner.hpp"

namespace sphinx::llm {

std::string PromptRunner::render(const std::string& template_id, const Bindings& bindings) const {
  return render_prompt(templates_.get(template_id), bindings);
}

Completion PromptRunner::run(const std::string& template_id, const Bindings& bindings,
                             const std::string& model_id, int retry) {
  std::string prompt = render(template_id, bindings);
  for (int i = 0; i < retry; ++i) prompt.append(kRetryNote);
  return gateway_.complete(make_request(std::move(prompt), model_id, models_.temperature));
}

}  // namespace sphinx::llm

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

#include <string>
#include <string_view>

#include "sphinx/llm/gateway.hpp"
#include "sphinx/llm/prompt_template.hpp"

namespace sphinx::llm {

/// Appended to a prompt when re-asking after an unparseable answer. The
/// changed prompt gets its own cache key, so replay stays deterministic.
inline constexpr std::string_view kRetryNote =
    "\n\nYour previous answer could not be parsed. Reply again, following the required output "
    "format exactly.";

/// Model ids per pipeline role. Generator and judge are independent.
struct ModelRoles {
  std::string generator = "gpt-4o";
  std::string judge = "o3-mini";
  std::string safety = "gpt-4o";
  std::string classifier = "gpt-4o";
  std::string candidate = "gpt-4o";
  double temperature = 0.0;
};

/// Renders a named template and sends it through the gateway.
class PromptRunner {
 public:
  PromptRunner(Gateway& gateway, const TemplateLibrary& templates, ModelRoles models = {})
      : gateway_(gateway), templates_(templates), models_(std::move(models)) {}

  std::string render(const std::string& template_id, const Bindings& bindings) const;

  /// `retry` > 0 appends kRetryNote once per retry.
  Completion run(const std::string& template_id, const Bindings& bindings,
                 const std::string& model_id, int retry = 0);

  Gateway& gateway() noexcept { return gateway_; }
  const ModelRoles& models() const noexcept { return models_; }

 private:
  Gateway& gateway_;
  const TemplateLibrary& templates_;
  ModelRoles models_;
};

}  // namespace sphinx::llm

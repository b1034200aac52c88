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


#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sphinx/cli/app.hpp"

int main(int argc, char** argv) {
  // Data goes to files; logs go to stderr.
  spdlog::set_default_logger(spdlog::stderr_color_mt("sphinx"));
  if (const char* level = std::getenv("SPHINX_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
  return sphinx::cli::run(argc, argv);
}

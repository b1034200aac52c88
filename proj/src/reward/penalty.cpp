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

#include "sphinx/reward/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "sphinx/core/error.hpp"

namespace sphinx::reward {

std::string_view to_string(LengthMode mode) {
  return mode == LengthMode::kTokens ? "tokens" : "items";
}

std::optional<LengthMode> length_mode_from_string(std::string_view name) {
  if (name == "items" || name == "Items") return LengthMode::kItems;
  if (name == "tokens" || name == "Tokens") return LengthMode::kTokens;
  return std::nullopt;
}

void PenaltyConfig::validate() const {
  if (!(safe_multiple > 0.0) || !std::isfinite(safe_multiple)) {
    throw Error(ErrorCode::kInvalidConfig, "M must be a positive finite number");
  }
  if (!(floor_multiple > safe_multiple) || !std::isfinite(floor_multiple)) {
    throw Error(ErrorCode::kInvalidConfig, "N must be finite and greater than M");
  }
  if (!(gamma_min > 0.0 && gamma_min <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "gamma_min must lie in (0, 1]");
  }
}

double gamma_of_ratio(double rho, const PenaltyConfig& cfg) {
  if (rho <= cfg.safe_multiple) return 1.0;
  if (rho >= cfg.floor_multiple) return cfg.gamma_min;
  const double span = cfg.floor_multiple - cfg.safe_multiple;
  const double k = (1.0 - cfg.gamma_min) / (span * span);
  const double excess = rho - cfg.safe_multiple;
  return std::max(cfg.gamma_min, 1.0 - k * excess * excess);
}

double length_penalty(std::int64_t pred_len, std::int64_t ref_len, const PenaltyConfig& cfg) {
  cfg.validate();
  if (ref_len < 1) throw Error(ErrorCode::kInvalidConfig, "ref_len must be >= 1");
  if (pred_len < 0) throw Error(ErrorCode::kInvalidConfig, "pred_len must be >= 0");
  return gamma_of_ratio(static_cast<double>(pred_len) / static_cast<double>(ref_len), cfg);
}

}  // namespace sphinx::reward

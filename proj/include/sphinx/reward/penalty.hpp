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
#include <optional>
#include <string_view>

namespace sphinx::reward {

enum class LengthMode { kItems, kTokens };

std::string_view to_string(LengthMode mode);
std::optional<LengthMode> length_mode_from_string(std::string_view name);

/// Length penalty shape. With rho = pred_len / ref_len, gamma is 1 up to
/// `safe_multiple` (M), falls quadratically to `gamma_min` at
/// `floor_multiple` (N) and stays there.
struct PenaltyConfig {
  double safe_multiple = 2.0;   // M
  double floor_multiple = 4.0;  // N
  double gamma_min = 0.2;
  LengthMode length_mode = LengthMode::kItems;

  /// INVALID_CONFIG unless 0 < M < N and 0 < gamma_min <= 1.
  void validate() const;
};

/// gamma(rho) = 1                                   for rho <= M
///            = max(gamma_min, 1 - k (rho - M)^2)   otherwise,
/// k = (1 - gamma_min) / (N - M)^2.
double gamma_of_ratio(double rho, const PenaltyConfig& cfg);

/// Throws INVALID_CONFIG when ref_len < 1 or pred_len < 0.
double length_penalty(std::int64_t pred_len, std::int64_t ref_len, const PenaltyConfig& cfg);

}  // namespace sphinx::reward

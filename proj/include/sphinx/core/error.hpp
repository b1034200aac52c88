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
#include <stdexcept>
#include <string>
#include <string_view>

namespace sphinx {

enum class ErrorCode {
  kParseError,
  kInvariantError,
  kDuplicateCaseId,
  kIoError,
  kTemplateError,
  kMissingSlot,
  kExtraSlot,
  kProviderError,
  kCacheMiss,
  kNoListFound,
  kNotANumber,
  kNotFound,
  kRateLimited,
  kAuthError,
  kParseFailed,
  kEmptyOutput,
  kInsufficientCases,
  kEmptyPartition,
  kInvalidConfig,
  kJudgeUnparseable,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every recoverable failure in the toolkit. The code is
/// the stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed input text. `byte_offset` points at the first offending byte.
class ParseError : public Error {
 public:
  ParseError(std::size_t byte_offset, const std::string& message)
      : Error(ErrorCode::kParseError,
              message + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class ProviderError : public Error {
 public:
  ProviderError(int status, bool retriable, const std::string& message)
      : Error(ErrorCode::kProviderError,
              "status " + std::to_string(status) + (retriable ? " (retriable) " : " ") + message),
        status_(status),
        retriable_(retriable) {}

  int status() const noexcept { return status_; }
  bool retriable() const noexcept { return retriable_; }

 private:
  int status_;
  bool retriable_;
};

class RateLimitedError : public Error {
 public:
  RateLimitedError(double retry_after_seconds, const std::string& message)
      : Error(ErrorCode::kRateLimited, message), retry_after_(retry_after_seconds) {}

  double retry_after_seconds() const noexcept { return retry_after_; }

 private:
  double retry_after_;
};

}  // namespace sphinx

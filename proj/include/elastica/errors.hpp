// Copyright 2026 The elastica-learn Authors
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

namespace elastica {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  non_finite,
  ill_conditioned,
  divergence,
  non_convergence,
  parse_error,
  io_error,
  format_error,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::ill_conditioned: return "ill_conditioned";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::format_error: return "format_error";
  }
  return "unknown";
}

/// Base of every error thrown by the library. The code is stable and
/// machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the text parsers; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::parse_error,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline void require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) throw Error(code, message);
}

inline void require_dims(std::size_t expected, std::size_t got,
                         std::string_view what) {
  if (expected != got) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": expected dimension " +
                    std::to_string(expected) + ", got " + std::to_string(got));
  }
}

}  // namespace detail
}  // namespace elastica

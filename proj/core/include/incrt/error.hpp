// Copyright 2026 The incrt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace incrt {

enum class ErrorCode {
  InvalidVertex,
  ShapeError,
  NumericError,
  SingularContext,
  UnsupportedModel,
  ConfigError,
  StaleState,
  FormatError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidVertex: return "InvalidVertex";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::NumericError: return "NumericError";
    case ErrorCode::SingularContext: return "SingularContext";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::StaleState: return "StaleState";
    case ErrorCode::FormatError: return "FormatError";
  }
  return "Unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace incrt

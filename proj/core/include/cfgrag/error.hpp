// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cfgrag {

enum class ErrorCode {
  kInvalidArgument,
  kConfigError,
  kIoError,
  // config network
  kUnsupportedFormat,
  kMalformedArtifact,
  // corpus
  kMissingPath,
  kDuplicateId,
  kDimensionMismatch,
  kUnknownChunk,
  kProviderUnavailable,
  // retrieval
  kEmptyStore,
  kRewriteTwice,
  kSearchUnavailable,
  // gateway
  kContextTooLong,
  kMalformedPrompt,
  // validator
  kTemplateMissing,
  kPlaceholderUnfilled,
  kPoolTooSmall,
  // evaluation
  kSchemaViolation,
  kMissingLabel,
  kEmptyMatrix,
  kNotAFailure,
  kHoldoutViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. `code()` identifies the contract violation; `line()`
/// is set for errors tied to a position in an input file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<int> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<int> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<int> line_;
};

}  // namespace cfgrag

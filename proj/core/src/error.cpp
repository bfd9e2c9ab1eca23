// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/error.hpp"

#include <fmt/format.h>

namespace cfgrag {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kMalformedArtifact: return "MalformedArtifact";
    case ErrorCode::kMissingPath: return "MissingPath";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnknownChunk: return "UnknownChunk";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kEmptyStore: return "EmptyStore";
    case ErrorCode::kRewriteTwice: return "RewriteTwice";
    case ErrorCode::kSearchUnavailable: return "SearchUnavailable";
    case ErrorCode::kContextTooLong: return "ContextTooLong";
    case ErrorCode::kMalformedPrompt: return "MalformedPrompt";
    case ErrorCode::kTemplateMissing: return "TemplateMissing";
    case ErrorCode::kPlaceholderUnfilled: return "PlaceholderUnfilled";
    case ErrorCode::kPoolTooSmall: return "PoolTooSmall";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kMissingLabel: return "MissingLabel";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kNotAFailure: return "NotAFailure";
    case ErrorCode::kHoldoutViolation: return "HoldoutViolation";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::optional<int> line) {
  if (line) return fmt::format("{} (line {}): {}", to_string(code), *line, message);
  return fmt::format("{}: {}", to_string(code), message);
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<int> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace cfgrag

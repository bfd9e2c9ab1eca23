// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfgrag/confignet/option.hpp"

namespace cfgrag::confignet {

enum class ArtifactKind {
  kSpringYaml,        // application*.yml / bootstrap*.yml
  kSpringProperties,  // application*.properties / bootstrap*.properties
  kProperties,        // any other *.properties
  kDockerfile,        // Dockerfile, Dockerfile.*, *.dockerfile
  kCompose,           // docker-compose*.yml, compose.yml
  kPom,               // pom.xml
};

/// Identifies a supported artifact from its file name, or nullopt.
std::optional<ArtifactKind> detect_artifact_kind(std::string_view file_path);

Technology technology_of(ArtifactKind kind);

/// Parses one configuration artifact into options in document order.
///
/// Throws Error{kUnsupportedFormat} for unknown file kinds and
/// Error{kMalformedArtifact} (with line) for syntax errors.
std::vector<ConfigOption> parse_artifact(std::string_view project, std::string_view file_path,
                                         std::string_view content);

struct ExtractFailure {
  std::string file_path;
  std::string message;
};

struct ExtractResult {
  std::vector<ConfigOption> options;
  std::vector<std::string> parsed_files;
  std::vector<ExtractFailure> failures;
};

/// Walks a project tree (sorted, skipping hidden directories and build
/// output) and parses every supported artifact. Parse failures are collected
/// rather than thrown.
ExtractResult extract_project(const std::filesystem::path& root, const std::string& project);

}  // namespace cfgrag::confignet

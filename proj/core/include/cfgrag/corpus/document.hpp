// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfgrag::corpus {

enum class SourceKind { kManual, kStackOverflow, kGithubRepo, kWebSearch, kProjectInfo, kShotExample };

std::string_view to_string(SourceKind kind) noexcept;
/// Throws Error{kInvalidArgument} on an unknown name.
SourceKind parse_source_kind(std::string_view name);

struct Document {
  std::string doc_id;
  SourceKind source_kind = SourceKind::kManual;
  std::optional<std::string> technology;
  std::string origin;  // URL or path
  std::optional<std::string> title;
  std::string text;
  std::chrono::system_clock::time_point fetched_at{};
};

/// One manifest entry: every file under `path` (relative to the corpus root)
/// becomes a Document tagged with `source_kind` and `technology`.
struct ManifestEntry {
  std::string key;
  std::string path;
  SourceKind source_kind = SourceKind::kManual;
  std::optional<std::string> technology;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  /// Reads the YAML manifest format:
  ///   sources:
  ///     - key: maven-docs
  ///       path: docs/maven
  ///       source_kind: manual
  ///       technology: maven
  static CorpusManifest load(const std::filesystem::path& file);
  static CorpusManifest parse(std::string_view yaml_text);
};

struct LoadResult {
  std::vector<Document> documents;  // sorted by doc_id
  std::size_t skipped_empty = 0;
};

/// doc_id = entry key + "/" + path relative to the entry path (the file name
/// for single-file entries). Throws kMissingPath and kDuplicateId.
LoadResult load_corpus(const std::filesystem::path& root, const CorpusManifest& manifest);

}  // namespace cfgrag::corpus

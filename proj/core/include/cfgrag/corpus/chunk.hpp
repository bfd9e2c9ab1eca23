// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cfgrag/corpus/document.hpp"

namespace cfgrag::corpus {

struct ChunkerConfig {
  std::size_t chunk_size = 512;  // whitespace tokens
  std::size_t overlap = 50;

  /// Throws Error{kInvalidArgument} unless 0 <= overlap < chunk_size.
  void validate() const;
};

/// Source fields copied from the parent document.
struct ChunkMetadata {
  SourceKind source_kind = SourceKind::kManual;
  std::optional<std::string> technology;
  std::string origin;
  std::optional<std::string> title;
  /// Set for dynamically ingested chunks; scopes them to one candidate.
  std::optional<std::string> candidate_id;

  friend bool operator==(const ChunkMetadata&, const ChunkMetadata&) = default;
};

struct Chunk {
  std::string chunk_id;  // doc_id + "#" + window_index
  std::string doc_id;
  std::size_t window_index = 0;
  std::size_t token_begin = 0;  // [token_begin, token_end) in whitespace tokens
  std::size_t token_end = 0;
  std::string text;
  std::vector<float> embedding;  // empty until embedded
  ChunkMetadata metadata;
};

/// Sliding windows of `chunk_size` tokens with stride chunk_size - overlap.
/// The last window may be shorter; no window is emitted whose tokens are all
/// covered by its predecessor. Chunk text is the original substring spanning
/// the window's first to last token.
std::vector<Chunk> chunk_document(const Document& doc, const ChunkerConfig& cfg = {});

/// Window starts/ends only, for a document of `token_count` tokens.
std::vector<std::pair<std::size_t, std::size_t>> window_spans(std::size_t token_count, const ChunkerConfig& cfg);

}  // namespace cfgrag::corpus

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/corpus/chunk.hpp"

#include <algorithm>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::corpus {

void ChunkerConfig::validate() const {
  if (chunk_size == 0 || overlap >= chunk_size) {
    throw Error(ErrorCode::kInvalidArgument, "chunker requires 0 <= overlap < chunk_size");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> window_spans(std::size_t token_count, const ChunkerConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  const std::size_t stride = cfg.chunk_size - cfg.overlap;
  for (std::size_t start = 0; start < token_count; start += stride) {
    const std::size_t end = std::min(token_count, start + cfg.chunk_size);
    spans.emplace_back(start, end);
    if (end == token_count) break;
  }
  return spans;
}

std::vector<Chunk> chunk_document(const Document& doc, const ChunkerConfig& cfg) {
  const auto tokens = util::whitespace_tokens(doc.text);
  std::vector<Chunk> out;
  std::size_t index = 0;
  for (const auto& [begin, end] : window_spans(tokens.size(), cfg)) {
    Chunk c;
    c.doc_id = doc.doc_id;
    c.window_index = index;
    c.chunk_id = doc.doc_id + "#" + std::to_string(index);
    c.token_begin = begin;
    c.token_end = end;
    c.text = doc.text.substr(tokens[begin].begin, tokens[end - 1].end - tokens[begin].begin);
    c.metadata = {doc.source_kind, doc.technology, doc.origin, doc.title, std::nullopt};
    out.push_back(std::move(c));
    ++index;
  }
  return out;
}

}  // namespace cfgrag::corpus

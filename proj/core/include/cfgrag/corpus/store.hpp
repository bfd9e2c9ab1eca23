// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cfgrag/corpus/chunk.hpp"
#include "cfgrag/corpus/embedding.hpp"

namespace cfgrag::corpus {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Keyword analysis shared by indexing and querying: whitespace tokens,
/// lower-cased, stripped of leading/trailing punctuation. Tokens containing
/// '.', '_' or '-' also contribute their pieces ("server.port" → "server.port",
/// "server", "port").
std::vector<std::string> analyze_terms(std::string_view text);

/// Analyzed, deduplicated and sorted terms of a keyword list.
std::vector<std::string> analyze_query_terms(std::span<const std::string> keywords);

struct UpsertStats {
  std::size_t inserted = 0;
  std::size_t replaced = 0;

  UpsertStats& operator+=(const UpsertStats& o) {
    inserted += o.inserted;
    replaced += o.replaced;
    return *this;
  }
  friend bool operator==(const UpsertStats&, const UpsertStats&) = default;
};

struct ScoredChunk {
  std::string chunk_id;
  double score = 0.0;
};

/// Restricts a search to chunks for which the predicate holds.
using ChunkFilter = std::function<bool(const ChunkMetadata&)>;

/// In-memory hybrid index: chunk table, exact dense index (cosine scan) and a
/// BM25 inverted index over the same chunk ids. Readers share; upserts take
/// exclusive access and apply a whole batch or nothing.
class HybridStore {
 public:
  static constexpr std::string_view kMagic = "RAGDEP01";

  explicit HybridStore(std::size_t dimension, Bm25Params params = {});
  HybridStore(HybridStore&& other) noexcept;
  HybridStore& operator=(HybridStore&&) = delete;
  HybridStore(const HybridStore&) = delete;

  std::size_t dimension() const noexcept { return dimension_; }
  const Bm25Params& params() const noexcept { return params_; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  /// All chunks must carry an embedding of length dimension(); otherwise
  /// throws kDimensionMismatch and leaves the store unchanged.
  UpsertStats upsert(std::vector<Chunk> chunks);

  /// Removes dynamic chunks tagged with `candidate_id`. Returns the count.
  std::size_t purge_candidate(const std::string& candidate_id);

  std::optional<Chunk> get(const std::string& chunk_id) const;
  std::vector<std::string> chunk_ids() const;
  /// Every chunk with its embedding, in chunk_id order.
  std::vector<Chunk> snapshot() const;

  /// BM25 of `query_terms` (already analyzed) against one chunk; kUnknownChunk
  /// if absent.
  double bm25_score(std::span<const std::string> query_terms, const std::string& chunk_id) const;

  /// Top-k by cosine, ties by chunk_id ascending.
  std::vector<ScoredChunk> dense_search(std::span<const float> query, std::size_t k,
                                        const ChunkFilter& filter = {}) const;
  /// Top-k chunks with positive BM25 over analyzed terms, ties by chunk_id.
  std::vector<ScoredChunk> sparse_search(std::span<const std::string> query_terms, std::size_t k,
                                         const ChunkFilter& filter = {}) const;

  std::size_t document_frequency(const std::string& term) const;
  double average_length() const;

  /// Sizes of the three structures agree and hold the same ids.
  bool consistent() const;

  /// Directory layout: chunks.jsonl, embeddings.bin (magic, u32 dimension,
  /// u64 rows, little-endian float32 rows in chunk_id order), bm25.json.
  void save(const std::filesystem::path& dir) const;
  static HybridStore load(const std::filesystem::path& dir);

 private:
  void index_terms_locked(const std::string& chunk_id, const std::string& text);
  void unindex_locked(const std::string& chunk_id);
  double bm25_locked(std::span<const std::string> query_terms, const std::string& chunk_id) const;

  std::size_t dimension_;
  Bm25Params params_;
  mutable std::shared_mutex mu_;

  std::map<std::string, Chunk> chunk_table_;  // embeddings stripped
  std::map<std::string, Embedding> dense_;
  std::unordered_map<std::string, std::map<std::string, std::uint32_t>> postings_;  // term → chunk → tf
  std::map<std::string, std::size_t> doc_length_;
  std::size_t total_length_ = 0;
};

}  // namespace cfgrag::corpus

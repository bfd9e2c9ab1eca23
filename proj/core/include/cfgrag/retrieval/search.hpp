// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfgrag/corpus/document.hpp"
#include "cfgrag/corpus/embedding.hpp"
#include "cfgrag/corpus/store.hpp"
#include "cfgrag/retrieval/query.hpp"

namespace cfgrag::retrieval {

struct RankedChunk {
  std::string chunk_id;
  std::optional<int> dense_rank;
  std::optional<int> sparse_rank;
  double fused_score = 0.0;
  std::optional<double> rerank_score;
  int final_rank = 0;
};

enum class FusionKind { kReciprocalRank, kWeighted };

struct FusionConfig {
  FusionKind kind = FusionKind::kReciprocalRank;
  double k_rrf = 60.0;
  /// Weighted fusion only: alpha * dense + (1 - alpha) * sparse, each leg
  /// min-max normalized to [0, 1] over its own result list.
  double alpha = 0.5;
};

struct SearchConfig {
  std::size_t k_dense = 50;
  std::size_t k_sparse = 50;
  FusionConfig fusion;
};

/// 1 / (k_rrf + rank).
double rrf_term(int rank, double k_rrf) noexcept;

/// Dense leg over the embedded semantic_text, sparse BM25 leg over the
/// analyzed keyword_terms, fused and sorted by fused_score descending then
/// chunk_id ascending; final_rank = position + 1. Throws kEmptyStore.
std::vector<RankedChunk> hybrid_search(const corpus::HybridStore& store, const RetrievalQuery& query,
                                       const corpus::EmbeddingProvider& provider, const SearchConfig& cfg = {},
                                       const corpus::ChunkFilter& filter = {});

enum class RerankerKind { kLateInteractionMaxSim, kEmbeddingSimilarity, kNone };

std::string_view to_string(RerankerKind kind) noexcept;
RerankerKind parse_reranker_kind(std::string_view name);

/// Sum over query vectors of the best cosine against any document vector.
double maxsim(std::span<const corpus::Embedding> query_tokens, std::span<const corpus::Embedding> doc_tokens);

/// Reorders by rerank_score descending, ties by fused_score then chunk_id,
/// and renumbers final_rank. MaxSim embeds whitespace tokens one by one;
/// embedding similarity compares the query embedding with the stored chunk
/// embedding. kNone keeps the fused order.
std::vector<RankedChunk> rerank(std::vector<RankedChunk> candidates, const RetrievalQuery& query,
                                RerankerKind kind, const corpus::EmbeddingProvider& provider,
                                const corpus::HybridStore& store);

struct ContextSlot {
  std::string chunk_id;
  corpus::SourceKind source_kind = corpus::SourceKind::kManual;
  std::string text;
};

struct ContextSlots {
  std::vector<ContextSlot> slots;
  std::size_t top_n = 0;
};

/// First top_n chunks by final_rank.
ContextSlots select_context(std::span<const RankedChunk> ranked, std::size_t top_n, const corpus::HybridStore& store);

}  // namespace cfgrag::retrieval

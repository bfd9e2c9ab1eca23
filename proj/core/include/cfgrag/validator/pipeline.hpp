// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfgrag/confignet/option.hpp"
#include "cfgrag/corpus/chunk.hpp"
#include "cfgrag/corpus/embedding.hpp"
#include "cfgrag/corpus/store.hpp"
#include "cfgrag/gateway/client.hpp"
#include "cfgrag/retrieval/query.hpp"
#include "cfgrag/retrieval/search.hpp"
#include "cfgrag/retrieval/web.hpp"
#include "cfgrag/validator/prompt.hpp"
#include "cfgrag/validator/verdict.hpp"

namespace cfgrag::validator {

inline constexpr std::string_view kVanillaId = "w/o";
inline constexpr std::string_view kRetryLine = "Respond with only the JSON object.";

struct ValidationRecord {
  std::string candidate_id;
  std::string model_id;
  std::string rag_variant_id;  // kVanillaId for runs without retrieval
  std::string prompt_sha256;
  retrieval::ContextSlots context;
  Verdict verdict;
  double wall_time_ms = 0.0;
  int model_calls = 0;
  std::vector<std::string> warnings;
  std::optional<std::string> error;  // set when the record was defaulted by an error
};

struct RetrievalSettings {
  std::string variant_id;
  const corpus::EmbeddingProvider* provider = nullptr;
  retrieval::SearchConfig search;
  retrieval::RerankerKind reranker = retrieval::RerankerKind::kLateInteractionMaxSim;
  std::size_t top_n = 5;
  bool dynamic_context = false;
  /// Ingest web results inside validate_candidate. Runners that ingest ahead
  /// of time turn this off.
  bool ingest_inline = true;
  /// Only this candidate's dynamic chunks are visible when set.
  bool scope_dynamic = false;
  retrieval::WebSearchClient* search_client = nullptr;
  corpus::ChunkerConfig chunker;
  retrieval::RewriteMode rewrite = retrieval::RewriteMode::kTemplate;
};

struct ValidationSettings {
  PromptVariant prompt_variant = PromptVariant::kBase;
  std::size_t shots = 0;
  const std::vector<ShotExample>* shot_pool = nullptr;
  const corpus::EmbeddingProvider* shot_provider = nullptr;
  const TemplateSet* templates = nullptr;  // null means the embedded set
  std::optional<RetrievalSettings> rag;    // empty means a vanilla run
  /// Contexts retrieved ahead of time, keyed by candidate id. Only valid when
  /// retrieval does not depend on the model (template rewrite).
  const std::map<std::string, retrieval::ContextSlots>* contexts = nullptr;
};

/// Retrieval (for RAG settings), shot selection, prompt, model call and
/// verdict parsing. A defaulted verdict triggers one retry with kRetryLine
/// appended. Propagates kProviderUnavailable and kContextTooLong.
ValidationRecord validate_candidate(const confignet::DependencyCandidate& candidate, corpus::HybridStore* store,
                                    const ValidationSettings& settings, gateway::ChatClient& client);

/// Retrieval path alone: query, rewrite, hybrid search, rerank, select.
retrieval::ContextSlots retrieve_context(const confignet::DependencyCandidate& candidate,
                                         const corpus::HybridStore& store, const RetrievalSettings& rag,
                                         gateway::ChatClient* rewrite_client, std::vector<std::string>& warnings);

}  // namespace cfgrag::validator

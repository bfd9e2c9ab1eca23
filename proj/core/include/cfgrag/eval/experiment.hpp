// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cfgrag/corpus/store.hpp"
#include "cfgrag/eval/dataset.hpp"
#include "cfgrag/eval/metrics.hpp"
#include "cfgrag/gateway/client.hpp"
#include "cfgrag/retrieval/web.hpp"
#include "cfgrag/validator/pipeline.hpp"

namespace cfgrag::eval {

struct EmbeddingSpec {
  std::string provider_id;
  std::size_t dimension = 0;
};

/// One grid condition. The vanilla condition has id "w/o" and no retrieval;
/// prompt variant and shots apply to every condition alike.
struct RagVariant {
  std::string id;
  bool retrieval = true;
  EmbeddingSpec embedding;
  retrieval::RerankerKind reranker = retrieval::RerankerKind::kLateInteractionMaxSim;
  std::size_t top_n = 5;
  bool dynamic_context = true;
  validator::PromptVariant prompt_variant = validator::PromptVariant::kBase;
  std::size_t shots = 0;

  bool is_vanilla() const noexcept { return !retrieval; }

  static RagVariant vanilla(validator::PromptVariant prompt = validator::PromptVariant::kBase, std::size_t shots = 0);
};

/// Variants 1-4: (ada2/1536, MaxSim, 5), (qwen2/3584, MaxSim, 5),
/// (qwen2/3584, embedding similarity, 5), (qwen2/3584, MaxSim, 3).
std::vector<RagVariant> studied_variants();
/// "w/o" followed by studied_variants().
std::vector<RagVariant> studied_conditions();
/// The studied model ids in table order.
std::vector<std::string> studied_model_ids();

/// Embedded summaries of benchmark items. kHoldoutViolation if any item is
/// from the holdout split.
std::vector<validator::ShotExample> build_shot_pool(std::span<const LabeledDependency> items,
                                                    const corpus::EmbeddingProvider& provider);

struct CellResult {
  std::string rag_id;
  std::string model_id;
  std::vector<validator::ValidationRecord> records;  // sorted by candidate_id
  ConfusionMatrix confusion;
  std::optional<MetricsReport> metrics;  // empty when incomplete or empty
  bool complete = true;
  std::optional<std::string> error;
  retrieval::SlotUsageTable slot_usage;
};

struct MeanRow {
  std::string rag_id;
  std::size_t cells = 0;  // complete cells averaged
  double failures = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ExperimentResult {
  std::string run_id;
  std::vector<std::string> rag_order;
  std::vector<std::string> model_order;
  std::vector<CellResult> cells;  // rag-major, then model
  LabelMap labels;
  std::map<std::string, Split, std::less<>> splits;

  const CellResult* find(std::string_view rag_id, std::string_view model_id) const;
  /// Unweighted mean over the complete cells of one condition.
  std::optional<MeanRow> mean(std::string_view rag_id) const;
};

/// Live objects a run needs besides its configuration.
struct ExperimentEnv {
  std::map<std::string, corpus::HybridStore*, std::less<>> stores;  // by embedding provider id
  std::map<std::string, const corpus::EmbeddingProvider*, std::less<>> providers;
  retrieval::WebSearchClient* search_client = nullptr;
  const validator::TemplateSet* templates = nullptr;
  std::shared_ptr<gateway::ResponseCache> cache;
  std::shared_ptr<gateway::RunLog> run_log;
  std::function<std::shared_ptr<net::HttpTransport>(const gateway::ModelConfig&)> transport_factory;
  /// Provider used to embed shot examples; defaults to the variant's provider.
  const corpus::EmbeddingProvider* shot_provider = nullptr;
  std::function<void(const std::string& line)> progress;
};

struct ExperimentConfig {
  std::string run_id = "run";
  std::vector<gateway::ModelConfig> models;
  std::vector<RagVariant> variants;
  const Dataset* dataset = nullptr;
  SplitSelector split = SplitSelector::kBenchmark;
  std::size_t concurrency = 4;
  bool scope_dynamic = false;
  retrieval::SearchConfig search;
  corpus::ChunkerConfig chunker;
  retrieval::RewriteMode rewrite = retrieval::RewriteMode::kTemplate;
  /// Optional filters; empty means all.
  std::vector<std::string> only_models;
  std::vector<std::string> only_variants;
};

/// Runs every (variant, model) cell. Dynamic web context is ingested for all
/// selected items before any validation so results do not depend on thread
/// timing. A cell whose model stays unavailable is marked incomplete; other
/// errors abort the run.
ExperimentResult run_experiment(const ExperimentConfig& cfg, ExperimentEnv& env);

}  // namespace cfgrag::eval

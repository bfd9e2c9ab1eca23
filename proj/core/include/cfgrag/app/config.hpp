// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfgrag/confignet/detect.hpp"
#include "cfgrag/corpus/chunk.hpp"
#include "cfgrag/corpus/embedding.hpp"
#include "cfgrag/corpus/store.hpp"
#include "cfgrag/eval/dataset.hpp"
#include "cfgrag/eval/experiment.hpp"
#include "cfgrag/gateway/client.hpp"
#include "cfgrag/retrieval/web.hpp"

namespace cfgrag::app {

struct EmbeddingProviderConfig {
  std::string id;
  std::size_t dimension = 0;
  corpus::EmbeddingMode mode = corpus::EmbeddingMode::kLocalHashFallback;
  std::uint64_t seed = corpus::HashEmbedder::kDefaultSeed;
  std::string endpoint;
  std::string model;
  std::string api_key_env;
  std::size_t batch_size = 64;
};

enum class SearchMode { kNone, kFixture, kHttp };

struct SearchSettings {
  SearchMode mode = SearchMode::kNone;
  std::filesystem::path fixture_dir;
  std::string endpoint;
  std::string api_key_env;
};

/// Everything a run needs, read from one YAML file. Relative paths are
/// resolved against the file's directory. Unknown keys are errors.
struct RunConfig {
  std::filesystem::path base_dir;
  std::string run_id = "run";
  std::vector<std::filesystem::path> project_roots;
  confignet::ValueStoplist stoplist = confignet::ValueStoplist::defaults();
  std::filesystem::path corpus_root;
  std::filesystem::path corpus_manifest;
  corpus::ChunkerConfig chunker;
  std::filesystem::path store_dir;
  std::vector<EmbeddingProviderConfig> embedding_providers;
  std::optional<std::string> shot_embedding;  // provider id
  std::vector<gateway::ModelConfig> models;
  std::vector<eval::RagVariant> variants;
  std::vector<std::filesystem::path> datasets;
  eval::SplitSelector split = eval::SplitSelector::kBenchmark;
  std::filesystem::path output_dir;
  std::size_t concurrency = 4;
  SearchSettings search;
  retrieval::SearchConfig retrieval;
  retrieval::RewriteMode rewrite = retrieval::RewriteMode::kTemplate;
  bool scope_dynamic = false;
  std::optional<std::filesystem::path> templates_dir;
  bool cache_enabled = true;
  std::optional<std::filesystem::path> cache_file;
  bool record_wall_time = false;

  /// kConfigError with the offending key.
  static RunConfig load(const std::filesystem::path& file);
  static RunConfig parse(std::string_view yaml_text, const std::filesystem::path& base_dir);

  const gateway::ModelConfig* find_model(std::string_view id) const;
  const eval::RagVariant* find_variant(std::string_view id) const;
  const EmbeddingProviderConfig* find_provider(std::string_view id) const;
  std::filesystem::path run_dir() const { return output_dir / run_id; }
};

using ProviderMap = std::map<std::string, std::unique_ptr<corpus::EmbeddingProvider>, std::less<>>;

ProviderMap make_providers(const RunConfig& cfg, std::shared_ptr<net::HttpTransport> transport = nullptr);

struct IngestSummary {
  std::string provider_id;
  std::size_t documents = 0;
  std::size_t skipped_empty = 0;
  std::size_t chunks = 0;
  corpus::UpsertStats upserts;
};

/// Loads the corpus once, then for each provider embeds its chunks into
/// store_dir/<provider id> (merging with an existing store) and saves it.
std::vector<IngestSummary> ingest(const RunConfig& cfg, const ProviderMap& providers);

/// Store directory for a provider.
std::filesystem::path store_path(const RunConfig& cfg, std::string_view provider_id);

std::unique_ptr<retrieval::WebSearchClient> make_search_client(const RunConfig& cfg);

}  // namespace cfgrag::app

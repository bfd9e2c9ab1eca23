// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cfgrag/confignet/option.hpp"
#include "cfgrag/corpus/chunk.hpp"
#include "cfgrag/corpus/embedding.hpp"
#include "cfgrag/corpus/store.hpp"
#include "cfgrag/net/http.hpp"
#include "cfgrag/retrieval/search.hpp"

namespace cfgrag::retrieval {

struct SearchResult {
  std::string url;
  std::string title;
  std::string text;
};

class WebSearchClient {
 public:
  virtual ~WebSearchClient() = default;
  /// Throws kSearchUnavailable when the backend cannot answer.
  virtual std::vector<SearchResult> search(const std::string& query, std::size_t max_results) = 0;
};

/// Reads `<dir>/<first 16 hex chars of sha256(query)>.json` holding
/// {"query": ..., "results": [{"url", "title", "text"}]}. A missing file
/// means no results; a missing directory or malformed file is unavailable.
class FixtureSearchClient final : public WebSearchClient {
 public:
  explicit FixtureSearchClient(std::filesystem::path dir);
  std::vector<SearchResult> search(const std::string& query, std::size_t max_results) override;

  static std::string fixture_name(const std::string& query);

 private:
  std::filesystem::path dir_;
};

/// GET `<endpoint>?q=<query>&format=json` against a metasearch service
/// answering {"results": [{"url", "title", "content"}]}.
class HttpSearchClient final : public WebSearchClient {
 public:
  HttpSearchClient(std::string endpoint, std::string api_key_env, std::shared_ptr<net::HttpTransport> transport,
                   net::RetryPolicy retry = {});
  std::vector<SearchResult> search(const std::string& query, std::size_t max_results) override;

 private:
  std::string endpoint_;
  std::string api_key_env_;
  std::shared_ptr<net::HttpTransport> transport_;
  net::RetryPolicy retry_;
};

inline constexpr std::size_t kDynamicResults = 3;

/// Searches with the candidate's semantic query, turns the first three
/// results into web_search documents "web/<candidate_id>/<i>", chunks,
/// embeds and upserts them with candidate_id set in the chunk metadata.
corpus::UpsertStats dynamic_ingest(const confignet::DependencyCandidate& candidate, WebSearchClient& client,
                                   corpus::HybridStore& store, const corpus::EmbeddingProvider& provider,
                                   const corpus::ChunkerConfig& chunker = {});

struct SlotUsageRow {
  std::size_t slot = 0;  // 1-based
  corpus::SourceKind source_kind = corpus::SourceKind::kManual;
  std::size_t count = 0;
  double fraction = 0.0;  // count / filled
};

struct SlotFill {
  std::size_t slot = 0;
  std::size_t filled = 0;
  std::size_t total = 0;
  double fill_rate() const { return total == 0 ? 0.0 : static_cast<double>(filled) / static_cast<double>(total); }
};

struct SlotUsageTable {
  std::vector<SlotUsageRow> rows;  // by slot, then source_kind
  std::vector<SlotFill> fill;      // one per slot position
};

/// Per slot position, the share of each source kind among records whose
/// slot is filled. Records with a shorter context count toward `total` only.
SlotUsageTable source_usage(std::span<const ContextSlots> contexts);

}  // namespace cfgrag::retrieval

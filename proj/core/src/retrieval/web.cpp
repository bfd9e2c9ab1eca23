// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/retrieval/web.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "cfgrag/error.hpp"
#include "cfgrag/retrieval/query.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::retrieval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string url_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out += fmt::format("%{:02X}", c);
    }
  }
  return out;
}

}  // namespace

FixtureSearchClient::FixtureSearchClient(fs::path dir) : dir_(std::move(dir)) {}

std::string FixtureSearchClient::fixture_name(const std::string& query) {
  return util::sha256_hex(query).substr(0, 16) + ".json";
}

std::vector<SearchResult> FixtureSearchClient::search(const std::string& query, std::size_t max_results) {
  if (!fs::is_directory(dir_)) {
    throw Error(ErrorCode::kSearchUnavailable, "search fixture directory " + dir_.string() + " does not exist");
  }
  const auto file = dir_ / fixture_name(query);
  if (!fs::exists(file)) return {};
  std::ifstream in(file, std::ios::binary);
  const auto j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("results") || !j["results"].is_array()) {
    throw Error(ErrorCode::kSearchUnavailable, "malformed search fixture " + file.string());
  }
  std::vector<SearchResult> out;
  for (const auto& r : j["results"]) {
    if (out.size() >= max_results) break;
    out.push_back({r.value("url", ""), r.value("title", ""), r.value("text", "")});
  }
  return out;
}

HttpSearchClient::HttpSearchClient(std::string endpoint, std::string api_key_env,
                                   std::shared_ptr<net::HttpTransport> transport, net::RetryPolicy retry)
    : endpoint_(std::move(endpoint)),
      api_key_env_(std::move(api_key_env)),
      transport_(std::move(transport)),
      retry_(std::move(retry)) {}

std::vector<SearchResult> HttpSearchClient::search(const std::string& query, std::size_t max_results) {
  net::HttpRequest req;
  req.method = "GET";
  req.url = fmt::format("{}{}q={}&format=json", endpoint_, endpoint_.find('?') == std::string::npos ? "?" : "&",
                        url_encode(query));
  if (auto key = net::env_or_empty(api_key_env_); !key.empty()) req.headers.emplace_back("Authorization", "Bearer " + key);

  const auto res = net::send_with_retry(*transport_, req, retry_);
  if (res.response.status != 200) {
    throw Error(ErrorCode::kSearchUnavailable,
                fmt::format("search endpoint answered {} {}", res.response.status, res.response.error));
  }
  const auto j = json::parse(res.response.body, nullptr, false);
  if (j.is_discarded() || !j.contains("results") || !j["results"].is_array()) {
    throw Error(ErrorCode::kSearchUnavailable, "search endpoint returned an unexpected body");
  }
  std::vector<SearchResult> out;
  for (const auto& r : j["results"]) {
    if (out.size() >= max_results) break;
    out.push_back({r.value("url", ""), r.value("title", ""), r.value("content", r.value("text", ""))});
  }
  return out;
}

corpus::UpsertStats dynamic_ingest(const confignet::DependencyCandidate& candidate, WebSearchClient& client,
                                   corpus::HybridStore& store, const corpus::EmbeddingProvider& provider,
                                   const corpus::ChunkerConfig& chunker) {
  const auto query = build_query(candidate);
  const auto results = client.search(query.semantic_text, kDynamicResults);

  std::vector<corpus::Chunk> chunks;
  for (std::size_t i = 0; i < results.size() && i < kDynamicResults; ++i) {
    if (util::trim(results[i].text).empty()) continue;
    corpus::Document doc;
    doc.doc_id = fmt::format("web/{}/{}", candidate.id, i);
    doc.source_kind = corpus::SourceKind::kWebSearch;
    doc.origin = results[i].url;
    if (!results[i].title.empty()) doc.title = results[i].title;
    doc.text = results[i].text;
    for (auto& c : corpus::chunk_document(doc, chunker)) {
      c.metadata.candidate_id = candidate.id;
      chunks.push_back(std::move(c));
    }
  }
  if (chunks.empty()) return {};

  std::vector<std::string> texts;
  texts.reserve(chunks.size());
  for (const auto& c : chunks) texts.push_back(c.text);
  auto vecs = corpus::embed_batch(texts, provider);
  for (std::size_t i = 0; i < chunks.size(); ++i) chunks[i].embedding = std::move(vecs[i]);
  return store.upsert(std::move(chunks));
}

SlotUsageTable source_usage(std::span<const ContextSlots> contexts) {
  std::size_t positions = 0;
  for (const auto& c : contexts) positions = std::max({positions, c.top_n, c.slots.size()});

  SlotUsageTable table;
  for (std::size_t slot = 0; slot < positions; ++slot) {
    std::map<corpus::SourceKind, std::size_t> counts;
    SlotFill fill{slot + 1, 0, 0};
    for (const auto& c : contexts) {
      if (slot >= std::max(c.top_n, c.slots.size())) continue;
      ++fill.total;
      if (slot < c.slots.size()) {
        ++fill.filled;
        ++counts[c.slots[slot].source_kind];
      }
    }
    for (const auto& [kind, n] : counts) {
      table.rows.push_back({slot + 1, kind, n, static_cast<double>(n) / static_cast<double>(fill.filled)});
    }
    table.fill.push_back(fill);
  }
  return table;
}

}  // namespace cfgrag::retrieval

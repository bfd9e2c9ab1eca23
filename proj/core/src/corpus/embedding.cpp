// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/corpus/embedding.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <future>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::corpus {

using nlohmann::json;

std::vector<Embedding> embed_batch(std::span<const std::string> texts, const EmbeddingProvider& provider) {
  if (texts.empty()) throw Error(ErrorCode::kInvalidArgument, "embed_batch needs at least one text");
  auto out = provider.embed(texts);
  if (out.size() != texts.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("provider {} returned {} vectors for {} texts", provider.id(), out.size(), texts.size()));
  }
  for (const auto& v : out) {
    if (v.size() != provider.dimension()) {
      throw Error(ErrorCode::kDimensionMismatch, fmt::format("provider {} declares dimension {} but returned {}",
                                                             provider.id(), provider.dimension(), v.size()));
    }
  }
  return out;
}

Embedding embed_one(const std::string& text, const EmbeddingProvider& provider) {
  return std::move(embed_batch(std::span<const std::string>(&text, 1), provider).front());
}

HashEmbedder::HashEmbedder(std::string id, std::size_t dimension, std::uint64_t seed)
    : id_(std::move(id)), dimension_(dimension), basis_(0xcbf29ce484222325ULL ^ seed) {
  if (dimension_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
}

Embedding HashEmbedder::embed_text(std::string_view text) const {
  Embedding v(dimension_, 0.0f);
  std::string padded = " " + util::to_lower(text) + " ";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const auto h = util::fnv1a64(std::string_view(padded).substr(i, 3), basis_);
    v[h % dimension_] += 1.0f;
  }
  double norm = 0.0;
  for (float x : v) norm += static_cast<double>(x) * x;
  if (norm > 0.0) {
    const double inv = 1.0 / std::sqrt(norm);
    for (float& x : v) x = static_cast<float>(x * inv);
  }
  return v;
}

std::vector<Embedding> HashEmbedder::embed(std::span<const std::string> texts) const {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_text(t));
  return out;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderConfig cfg, std::shared_ptr<net::HttpTransport> transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)), limiter_(cfg_.max_in_flight) {
  if (cfg_.dimension == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  if (cfg_.batch_size == 0) cfg_.batch_size = 1;
}

std::vector<Embedding> RemoteEmbedder::embed_one_batch(std::span<const std::string> texts) const {
  json body{{"model", cfg_.model}, {"input", json::array()}};
  for (const auto& t : texts) body["input"].push_back(t);

  net::HttpRequest req;
  req.url = cfg_.endpoint;
  req.body = body.dump();
  req.timeout = cfg_.timeout;
  req.headers.emplace_back("Content-Type", "application/json");
  if (auto key = net::env_or_empty(cfg_.api_key_env); !key.empty()) {
    req.headers.emplace_back("Authorization", "Bearer " + key);
  }

  net::RetriedResponse res;
  {
    auto permit = limiter_.acquire();
    res = net::send_with_retry(*transport_, req, cfg_.retry);
  }
  if (res.response.status < 200 || res.response.status >= 300) {
    throw Error(ErrorCode::kProviderUnavailable,
                fmt::format("embedding endpoint {} failed after {} retries: status {} {}", cfg_.endpoint, res.retries,
                            res.response.status, res.response.error));
  }

  const auto parsed = json::parse(res.response.body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("data") || !parsed["data"].is_array()) {
    throw Error(ErrorCode::kProviderUnavailable, "embedding endpoint returned an unexpected body");
  }
  std::vector<Embedding> out(texts.size());
  std::size_t position = 0;
  for (const auto& item : parsed["data"]) {
    const std::size_t index = item.contains("index") ? item["index"].get<std::size_t>() : position;
    ++position;
    if (index >= out.size() || !item.contains("embedding")) {
      throw Error(ErrorCode::kProviderUnavailable, "embedding endpoint returned an out-of-range item");
    }
    out[index] = item["embedding"].get<Embedding>();
    if (out[index].size() != cfg_.dimension) {
      throw Error(ErrorCode::kDimensionMismatch, fmt::format("provider {} declares dimension {} but returned {}",
                                                             cfg_.id, cfg_.dimension, out[index].size()));
    }
  }
  return out;
}

std::vector<Embedding> RemoteEmbedder::embed(std::span<const std::string> texts) const {
  std::vector<std::future<std::vector<Embedding>>> pending;
  for (std::size_t i = 0; i < texts.size(); i += cfg_.batch_size) {
    const auto batch = texts.subspan(i, std::min(cfg_.batch_size, texts.size() - i));
    pending.push_back(std::async(std::launch::async, [this, batch] { return embed_one_batch(batch); }));
  }
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (auto& f : pending) {
    auto part = f.get();
    for (auto& v : part) out.push_back(std::move(v));
  }
  return out;
}

double cosine(std::span<const float> a, std::span<const float> b) {
  const std::size_t n = std::min(a.size(), b.size());
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  for (std::size_t i = n; i < a.size(); ++i) na += static_cast<double>(a[i]) * a[i];
  for (std::size_t i = n; i < b.size(); ++i) nb += static_cast<double>(b[i]) * b[i];
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace cfgrag::corpus

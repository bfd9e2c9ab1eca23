// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cfgrag/net/http.hpp"

namespace cfgrag::corpus {

using Embedding = std::vector<float>;

enum class EmbeddingMode { kRemoteHttp, kLocalHashFallback };

/// Text → fixed-dimension vector. Implementations are deterministic within
/// one instance and safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual const std::string& id() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual EmbeddingMode mode() const = 0;
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) const = 0;
};

/// Validating front door: rejects empty batches and checks every returned
/// vector against the declared dimension (kDimensionMismatch).
std::vector<Embedding> embed_batch(std::span<const std::string> texts, const EmbeddingProvider& provider);
Embedding embed_one(const std::string& text, const EmbeddingProvider& provider);

/// Offline embedder: L2-normalized frequency vector of hashed character
/// trigrams. The text is lower-cased and padded with one space on each side;
/// each 3-byte window w adds 1 to bucket fnv1a64(w, basis) mod dimension,
/// where basis = 0xcbf29ce484222325 xor seed.
class HashEmbedder final : public EmbeddingProvider {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0x5eed0fc04f16ULL;

  HashEmbedder(std::string id, std::size_t dimension, std::uint64_t seed = kDefaultSeed);

  const std::string& id() const override { return id_; }
  std::size_t dimension() const override { return dimension_; }
  EmbeddingMode mode() const override { return EmbeddingMode::kLocalHashFallback; }
  std::vector<Embedding> embed(std::span<const std::string> texts) const override;

  Embedding embed_text(std::string_view text) const;

 private:
  std::string id_;
  std::size_t dimension_;
  std::uint64_t basis_;
};

struct RemoteEmbedderConfig {
  std::string id;
  std::size_t dimension = 1536;
  std::string endpoint;  // full URL of an /embeddings route
  std::string model;
  std::string api_key_env;
  std::size_t batch_size = 64;
  int max_in_flight = 4;
  std::chrono::milliseconds timeout{60'000};
  net::RetryPolicy retry;
};

/// Embeddings over the common `{"model", "input": [...]}` →
/// `{"data": [{"embedding": [...], "index": i}]}` HTTP schema.
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  RemoteEmbedder(RemoteEmbedderConfig cfg, std::shared_ptr<net::HttpTransport> transport);

  const std::string& id() const override { return cfg_.id; }
  std::size_t dimension() const override { return cfg_.dimension; }
  EmbeddingMode mode() const override { return EmbeddingMode::kRemoteHttp; }
  std::vector<Embedding> embed(std::span<const std::string> texts) const override;

 private:
  std::vector<Embedding> embed_one_batch(std::span<const std::string> texts) const;

  RemoteEmbedderConfig cfg_;
  std::shared_ptr<net::HttpTransport> transport_;
  mutable net::InflightLimiter limiter_;
};

/// Cosine similarity computed in double precision; 0 when either side is the
/// zero vector.
double cosine(std::span<const float> a, std::span<const float> b);

}  // namespace cfgrag::corpus

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "cfgrag/gateway/model.hpp"
#include "cfgrag/net/http.hpp"

namespace cfgrag::gateway {

struct Usage {
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
};

struct Completion {
  std::string text;
  Usage usage;
  double latency_ms = 0.0;
  int http_status = 0;
  int retries = 0;
  bool cached = false;
  std::string prompt_sha256;
};

/// Responses keyed by (model_id, prompt hash). With a file, entries are
/// loaded at construction and appended as JSON Lines on insert.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::filesystem::path file);

  std::optional<std::string> find(const std::string& model_id, const std::string& prompt_hash) const;
  void insert(const std::string& model_id, const std::string& prompt_hash, const std::string& text);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, std::string> entries_;
  std::optional<std::filesystem::path> file_;
};

struct RunLogEntry {
  std::string timestamp;  // UTC, ISO 8601
  std::string model_id;
  std::string prompt_sha256;
  double latency_ms = 0.0;
  int http_status = 0;
  int retries = 0;
};

/// Append-only JSON Lines log of model calls.
class RunLog {
 public:
  explicit RunLog(std::filesystem::path file);
  void append(const RunLogEntry& entry);
  const std::filesystem::path& path() const noexcept { return file_; }

 private:
  std::mutex mu_;
  std::filesystem::path file_;
};

struct ClientOptions {
  std::shared_ptr<ResponseCache> cache;  // null disables caching
  std::shared_ptr<RunLog> run_log;       // null disables logging
  int max_in_flight = 4;
  net::RetryPolicy retry;  // max_retries is taken from ModelConfig::retries
};

/// Chat-completions client. Thread-safe.
class ChatClient {
 public:
  ChatClient(ModelConfig cfg, std::shared_ptr<net::HttpTransport> transport, ClientOptions options = {});

  const ModelConfig& config() const noexcept { return cfg_; }

  /// Throws kContextTooLong before any request when the estimated prompt
  /// size exceeds the model's context length, kProviderUnavailable when the
  /// endpoint keeps failing or answers with an unusable body.
  Completion complete(std::span<const ChatMessage> messages);

  /// Request body sent for `messages`.
  std::string request_body(std::span<const ChatMessage> messages) const;

 private:
  ModelConfig cfg_;
  std::shared_ptr<net::HttpTransport> transport_;
  ClientOptions options_;
  net::InflightLimiter limiter_;
};

/// Transport for `cfg`: the in-process mock for ProviderKind::kMock, else
/// the default HTTP transport.
std::shared_ptr<net::HttpTransport> make_transport(const ModelConfig& cfg);

}  // namespace cfgrag::gateway

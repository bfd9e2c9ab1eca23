// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfgrag::gateway {

enum class ProviderKind { kMock, kHttp };

std::string_view to_string(ProviderKind kind) noexcept;
ProviderKind parse_provider_kind(std::string_view name);

struct ModelConfig {
  std::string model_id;  // recorded verbatim, e.g. "gpt-4o-2024-05-13"
  ProviderKind provider = ProviderKind::kMock;
  std::string endpoint;  // full chat-completions URL for kHttp
  std::string api_key_env;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::chrono::seconds timeout{120};
  int retries = 3;
  std::optional<std::size_t> context_length;  // overrides the built-in table

  /// Throws kConfigError: temperature other than 0, empty model id, missing
  /// endpoint for kHttp, non-positive max_tokens, unknown context length.
  void validate() const;
};

/// Context lengths of the studied models, in tokens.
std::optional<std::size_t> known_context_length(std::string_view model_id);
/// Override if set, else the table. Throws kConfigError for unknown models.
std::size_t context_length(const ModelConfig& cfg);

/// Conservative token estimate: max(whitespace words, ceil(bytes / 4)).
std::size_t estimate_tokens(std::string_view text);

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// The text a prompt hash is taken over: each message as
/// "<role>\n<content>\n" in order.
std::string render_messages(std::span<const ChatMessage> messages);
std::string prompt_sha256(std::span<const ChatMessage> messages);

}  // namespace cfgrag::gateway

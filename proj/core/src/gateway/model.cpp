// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/gateway/model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::gateway {

namespace {

struct KnownModel {
  std::string_view id;
  std::size_t context;
};

// 128k, 16k and 8k windows as published by the model vendors.
constexpr std::array<KnownModel, 4> kKnownModels{{
    {"gpt-4o-2024-05-13", 128000},
    {"gpt-3.5-turbo-0125", 16385},
    {"llama3:70b", 8192},
    {"llama3:8b", 8192},
}};

}  // namespace

std::string_view to_string(ProviderKind kind) noexcept { return kind == ProviderKind::kMock ? "mock" : "http"; }

ProviderKind parse_provider_kind(std::string_view name) {
  if (name == "mock") return ProviderKind::kMock;
  if (name == "http") return ProviderKind::kHttp;
  throw Error(ErrorCode::kConfigError, "unknown model provider " + std::string(name));
}

void ModelConfig::validate() const {
  if (model_id.empty()) throw Error(ErrorCode::kConfigError, "model_id is empty");
  if (temperature != 0.0) {
    throw Error(ErrorCode::kConfigError, fmt::format("model {}: temperature must be 0, got {}", model_id, temperature));
  }
  if (provider == ProviderKind::kHttp && endpoint.empty()) {
    throw Error(ErrorCode::kConfigError, "model " + model_id + " needs an endpoint");
  }
  if (max_tokens <= 0) throw Error(ErrorCode::kConfigError, "model " + model_id + ": max_tokens must be positive");
  if (retries < 0) throw Error(ErrorCode::kConfigError, "model " + model_id + ": retries must be >= 0");
  (void)gateway::context_length(*this);
}

std::optional<std::size_t> known_context_length(std::string_view model_id) {
  const auto it = std::find_if(kKnownModels.begin(), kKnownModels.end(), [&](const auto& m) { return m.id == model_id; });
  if (it == kKnownModels.end()) return std::nullopt;
  return it->context;
}

std::size_t context_length(const ModelConfig& cfg) {
  if (cfg.context_length) return *cfg.context_length;
  if (auto known = known_context_length(cfg.model_id)) return *known;
  throw Error(ErrorCode::kConfigError, "model " + cfg.model_id + " has no known context length; set context_length");
}

std::size_t estimate_tokens(std::string_view text) {
  const auto words = util::whitespace_tokens(text).size();
  return std::max(words, (text.size() + 3) / 4);
}

std::string render_messages(std::span<const ChatMessage> messages) {
  std::string out;
  for (const auto& m : messages) {
    out += m.role;
    out += '\n';
    out += m.content;
    out += '\n';
  }
  return out;
}

std::string prompt_sha256(std::span<const ChatMessage> messages) { return util::sha256_hex(render_messages(messages)); }

}  // namespace cfgrag::gateway

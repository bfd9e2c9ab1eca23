// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/gateway/client.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <chrono>

#include "cfgrag/error.hpp"
#include "cfgrag/gateway/mock.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::gateway {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}.{:03d}Z", fmt::gmtime(std::chrono::system_clock::to_time_t(now)), ms);
}

}  // namespace

ResponseCache::ResponseCache(fs::path file) : file_(std::move(file)) {
  std::ifstream in(*file_);
  std::string line;
  while (std::getline(in, line)) {
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;  // tolerate a torn last line
    entries_[{j.value("model_id", ""), j.value("prompt_sha256", "")}] = j.value("text", "");
  }
}

std::optional<std::string> ResponseCache::find(const std::string& model_id, const std::string& prompt_hash) const {
  std::lock_guard lock(mu_);
  const auto it = entries_.find({model_id, prompt_hash});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::insert(const std::string& model_id, const std::string& prompt_hash, const std::string& text) {
  std::lock_guard lock(mu_);
  const bool fresh = entries_.insert_or_assign({model_id, prompt_hash}, text).second;
  if (fresh && file_) {
    if (file_->has_parent_path()) fs::create_directories(file_->parent_path());
    std::ofstream out(*file_, std::ios::app);
    out << json{{"model_id", model_id}, {"prompt_sha256", prompt_hash}, {"text", text}}.dump() << '\n';
  }
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

RunLog::RunLog(fs::path file) : file_(std::move(file)) {
  if (file_.has_parent_path()) fs::create_directories(file_.parent_path());
}

void RunLog::append(const RunLogEntry& e) {
  const json j{{"timestamp", e.timestamp},         {"model_id", e.model_id},       {"prompt_sha256", e.prompt_sha256},
               {"latency_ms", e.latency_ms},       {"http_status", e.http_status}, {"retries", e.retries}};
  std::lock_guard lock(mu_);
  std::ofstream out(file_, std::ios::app);
  out << j.dump() << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "cannot append to run log " + file_.string());
}

ChatClient::ChatClient(ModelConfig cfg, std::shared_ptr<net::HttpTransport> transport, ClientOptions options)
    : cfg_(std::move(cfg)),
      transport_(std::move(transport)),
      options_(std::move(options)),
      limiter_(options_.max_in_flight) {
  cfg_.validate();
  options_.retry.max_retries = cfg_.retries;
}

std::string ChatClient::request_body(std::span<const ChatMessage> messages) const {
  json body{{"model", cfg_.model_id}, {"temperature", cfg_.temperature}, {"max_tokens", cfg_.max_tokens}};
  body["messages"] = json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  return body.dump();
}

Completion ChatClient::complete(std::span<const ChatMessage> messages) {
  Completion out;
  out.prompt_sha256 = prompt_sha256(messages);

  const auto rendered = render_messages(messages);
  const auto tokens = estimate_tokens(rendered);
  const auto limit = context_length(cfg_);
  if (tokens > limit) {
    throw Error(ErrorCode::kContextTooLong,
                fmt::format("prompt of ~{} tokens exceeds the {}-token context of {}", tokens, limit, cfg_.model_id));
  }

  if (options_.cache) {
    if (auto hit = options_.cache->find(cfg_.model_id, out.prompt_sha256)) {
      out.text = std::move(*hit);
      out.cached = true;
      out.http_status = 200;
      out.usage = {tokens, estimate_tokens(out.text)};
      return out;
    }
  }

  net::HttpRequest req;
  req.url = cfg_.endpoint;
  req.body = request_body(messages);
  req.timeout = cfg_.timeout;
  req.headers.emplace_back("Content-Type", "application/json");
  if (auto key = net::env_or_empty(cfg_.api_key_env); !key.empty()) {
    req.headers.emplace_back("Authorization", "Bearer " + key);
  }
  // Guard against a mutated body reaching the wire.
  if (json::parse(req.body).at("temperature").get<double>() != 0.0) {
    throw Error(ErrorCode::kConfigError, "refusing to send a request with non-zero temperature");
  }

  const auto start = std::chrono::steady_clock::now();
  net::RetriedResponse res;
  {
    auto permit = limiter_.acquire();
    res = net::send_with_retry(*transport_, req, options_.retry);
  }
  out.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.http_status = res.response.status;
  out.retries = res.retries;
  if (options_.run_log) {
    options_.run_log->append({utc_now(), cfg_.model_id, out.prompt_sha256, out.latency_ms, out.http_status, out.retries});
  }

  if (res.response.status < 200 || res.response.status >= 300) {
    throw Error(ErrorCode::kProviderUnavailable,
                fmt::format("model {} failed after {} retries: status {} {}{}", cfg_.model_id, res.retries,
                            res.response.status, res.response.error, res.response.body.substr(0, 200)));
  }
  const auto j = json::parse(res.response.body, nullptr, false);
  const json* content = nullptr;
  if (!j.is_discarded() && j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
    const auto& msg = j["choices"][0];
    if (msg.contains("message") && msg["message"].contains("content") && msg["message"]["content"].is_string()) {
      content = &msg["message"]["content"];
    }
  }
  if (!content) throw Error(ErrorCode::kProviderUnavailable, "model " + cfg_.model_id + " returned no message content");
  out.text = content->get<std::string>();
  if (j.contains("usage") && j["usage"].is_object()) {
    out.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::size_t{0});
    out.usage.completion_tokens = j["usage"].value("completion_tokens", std::size_t{0});
  }
  if (options_.cache) options_.cache->insert(cfg_.model_id, out.prompt_sha256, out.text);
  return out;
}

std::shared_ptr<net::HttpTransport> make_transport(const ModelConfig& cfg) {
  if (cfg.provider == ProviderKind::kMock) return std::make_shared<MockTransport>();
  return net::make_default_transport();
}

}  // namespace cfgrag::gateway

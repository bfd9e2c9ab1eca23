// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/gateway/mock.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>

#include "cfgrag/confignet/normalize.hpp"
#include "cfgrag/error.hpp"
#include "cfgrag/gateway/model.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::gateway {

using nlohmann::json;

namespace {

constexpr std::string_view kOpen = "[dependency]";
constexpr std::string_view kClose = "[/dependency]";

bool is_expose(std::string_view name) {
  return util::iequals(name.substr(0, name.find('[')), "EXPOSE");
}

bool mock_rule(const DependencyBlock& d) {
  if (confignet::normalize_value(d.value_a, d.name_a) != confignet::normalize_value(d.value_b, d.name_b)) return false;
  const auto ta = util::name_subtokens(d.name_a);
  const auto tb = util::name_subtokens(d.name_b);
  const bool shared = std::any_of(ta.begin(), ta.end(),
                                  [&](const std::string& t) { return std::find(tb.begin(), tb.end(), t) != tb.end(); });
  if (shared) return true;
  const auto has_port = [](std::string_view n) { return util::to_lower(n).find("port") != std::string::npos; };
  return (is_expose(d.name_a) && has_port(d.name_b)) || (is_expose(d.name_b) && has_port(d.name_a));
}

}  // namespace

DependencyBlock parse_dependency_block(std::string_view prompt) {
  const auto open = prompt.find(kOpen);
  if (open == std::string_view::npos) throw Error(ErrorCode::kMalformedPrompt, "prompt has no [dependency] block");
  const auto body_begin = open + kOpen.size();
  const auto close = prompt.find(kClose, body_begin);
  if (close == std::string_view::npos) throw Error(ErrorCode::kMalformedPrompt, "[dependency] block is not closed");

  std::map<std::string, std::string, std::less<>> fields;
  const auto body = prompt.substr(body_begin, close - body_begin);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto eol = std::min(body.find('\n', pos), body.size());
    const auto line = body.substr(pos, eol - pos);
    pos = eol + 1;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    fields[std::string(util::trim(line.substr(0, eq)))] = std::string(util::trim(line.substr(eq + 1)));
  }

  auto need = [&](std::string_view key) -> std::string {
    const auto it = fields.find(key);
    if (it == fields.end()) throw Error(ErrorCode::kMalformedPrompt, fmt::format("[dependency] block lacks {}", key));
    return it->second;
  };
  auto opt = [&](std::string_view key) -> std::string {
    const auto it = fields.find(key);
    return it == fields.end() ? std::string() : it->second;
  };
  DependencyBlock d;
  d.name_a = need("option_a.name");
  d.value_a = need("option_a.value");
  d.name_b = need("option_b.name");
  d.value_b = need("option_b.value");
  d.tech_a = opt("option_a.technology");
  d.tech_b = opt("option_b.technology");
  d.file_a = opt("option_a.file");
  d.file_b = opt("option_b.file");
  return d;
}

std::string mock_complete(std::string_view prompt) {
  const auto d = parse_dependency_block(prompt);
  const bool dep = mock_rule(d);
  json verdict;
  verdict["plan"] = fmt::format("Compare the values of {} and {}, then check whether their names refer to the same "
                                "setting.",
                                d.name_a, d.name_b);
  verdict["rationale"] = dep ? fmt::format("{} and {} hold the same value and name the same setting.", d.name_a, d.name_b)
                             : fmt::format("{} and {} share a value but name unrelated settings.", d.name_a, d.name_b);
  verdict["uncertainty"] = dep ? 10 : 9;
  verdict["isDependency"] = dep;
  return verdict.dump();
}

net::HttpResponse MockTransport::send(const net::HttpRequest& request) {
  ++calls_;
  const auto body = json::parse(request.body, nullptr, false);
  if (body.is_discarded() || !body.contains("messages") || !body["messages"].is_array()) {
    return {400, R"({"error":"malformed request"})", ""};
  }
  if (!body.contains("temperature") || !body["temperature"].is_number() || body["temperature"].get<double>() != 0.0) {
    return {400, R"({"error":"temperature must be 0"})", ""};
  }
  std::string prompt;
  for (const auto& m : body["messages"]) prompt += m.value("content", "") + "\n";

  std::string text;
  try {
    text = mock_complete(prompt);
  } catch (const Error& e) {
    return {400, json{{"error", e.what()}}.dump(), ""};
  }
  json reply{{"id", "mock-" + util::sha256_hex(prompt).substr(0, 12)},
             {"object", "chat.completion"},
             {"model", body.value("model", "")},
             {"choices", json::array({json{{"index", 0},
                                           {"message", {{"role", "assistant"}, {"content", text}}},
                                           {"finish_reason", "stop"}}})},
             {"usage",
              {{"prompt_tokens", estimate_tokens(prompt)},
               {"completion_tokens", estimate_tokens(text)},
               {"total_tokens", estimate_tokens(prompt) + estimate_tokens(text)}}}};
  return {200, reply.dump(), ""};
}

}  // namespace cfgrag::gateway

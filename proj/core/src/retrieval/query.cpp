// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/retrieval/query.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::retrieval {

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 9> kAbbreviations{{
    {"yml", "yaml"},
    {"k8s", "kubernetes"},
    {"db", "database"},
    {"env", "environment"},
    {"cfg", "configuration"},
    {"conf", "configuration"},
    {"props", "properties"},
    {"repo", "repository"},
    {"pom", "maven pom"},
}};

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (s.empty()) return;
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

bool is_edge_punct(char c) { return !std::isalnum(static_cast<unsigned char>(c)); }

std::string expand_abbreviations(std::string_view text, const std::vector<std::string>& protected_terms) {
  std::string out;
  std::size_t last = 0;
  for (const auto& span : util::whitespace_tokens(text)) {
    std::string_view token = text.substr(span.begin, span.end - span.begin);
    std::size_t lead = 0;
    std::size_t trail = token.size();
    while (lead < trail && is_edge_punct(token[lead])) ++lead;
    while (trail > lead && is_edge_punct(token[trail - 1])) --trail;
    const auto core = token.substr(lead, trail - lead);

    out.append(text.substr(last, span.begin - last));
    last = span.end;
    const bool is_protected = std::any_of(protected_terms.begin(), protected_terms.end(), [&](const std::string& p) {
      return p == core || p == token;
    });
    const auto lower = util::to_lower(core);
    const auto hit = std::find_if(kAbbreviations.begin(), kAbbreviations.end(),
                                  [&](const auto& kv) { return kv.first == lower; });
    if (is_protected || hit == kAbbreviations.end()) {
      out.append(token);
    } else {
      out.append(token.substr(0, lead)).append(hit->second).append(token.substr(trail));
    }
  }
  out.append(text.substr(last));
  return out;
}

RetrievalQuery template_rewrite(const RetrievalQuery& query) {
  RetrievalQuery out = query;
  out.semantic_text = expand_abbreviations(query.semantic_text, query.protected_terms) + " configuration dependency";
  out.rewritten = true;
  return out;
}

}  // namespace

RetrievalQuery build_query(const confignet::DependencyCandidate& candidate) {
  const auto& a = candidate.option_a;
  const auto& b = candidate.option_b;
  const auto tech_a = a.technology.name();
  const auto tech_b = b.technology.name();

  RetrievalQuery q;
  q.candidate_id = candidate.id;
  q.semantic_text = fmt::format("Do {} option {} (value {}) and {} option {} (value {}) depend on each other?", tech_a,
                                a.name, a.raw_value, tech_b, b.name, b.raw_value);
  for (const auto* s : {&a.name, &b.name, &a.raw_value, &b.raw_value, &tech_a, &tech_b}) push_unique(q.keyword_terms, *s);
  for (const auto* s : {&a.name, &b.name, &a.raw_value, &b.raw_value}) push_unique(q.protected_terms, *s);
  return q;
}

RetrievalQuery rewrite_query(const RetrievalQuery& query, RewriteMode mode, const LlmFn& llm, std::string* warning) {
  if (query.rewritten) throw Error(ErrorCode::kRewriteTwice, "query " + query.candidate_id + " is already rewritten");
  if (mode == RewriteMode::kTemplate) return template_rewrite(query);

  auto fallback = [&](const std::string& why) {
    if (warning) *warning = "llm rewrite fell back to template: " + why;
    return template_rewrite(query);
  };
  if (!llm) return fallback("no model configured");

  std::string answer;
  try {
    answer = llm(fmt::format(
        "Rewrite the question below into one precise web search query about software configuration. Keep every "
        "option name and value verbatim. Reply with the query only.\n\nQuestion: {}",
        query.semantic_text));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kProviderUnavailable) throw;
    return fallback(e.what());
  }
  const auto line = std::string(util::trim(answer.substr(0, answer.find('\n'))));
  for (std::size_t i = 0; i < std::min<std::size_t>(2, query.protected_terms.size()); ++i) {
    if (line.find(query.protected_terms[i]) == std::string::npos) {
      return fallback("answer dropped " + query.protected_terms[i]);
    }
  }
  RetrievalQuery out = query;
  out.semantic_text = line;
  out.rewritten = true;
  return out;
}

}  // namespace cfgrag::retrieval

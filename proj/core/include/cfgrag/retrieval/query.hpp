// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cfgrag/confignet/option.hpp"

namespace cfgrag::retrieval {

struct RetrievalQuery {
  std::string candidate_id;
  std::string semantic_text;
  std::vector<std::string> keyword_terms;
  bool rewritten = false;
  // Verbatim names and values; rewriting never touches these.
  std::vector<std::string> protected_terms;
};

/// "Do <tech_a> option <name_a> (value <v_a>) and <tech_b> option <name_b>
/// (value <v_b>) depend on each other?" with keyword terms {names, values,
/// technologies} deduplicated in that order.
RetrievalQuery build_query(const confignet::DependencyCandidate& candidate);

enum class RewriteMode { kTemplate, kLlm };

/// Sends one instruction and returns the model's raw text. Supplied by the
/// caller so retrieval does not depend on a particular gateway.
using LlmFn = std::function<std::string(const std::string& instruction)>;

/// Template mode expands abbreviations outside protected terms and appends
/// " configuration dependency". LLM mode asks `llm` for a better search
/// question; on kProviderUnavailable, or when the answer drops an option
/// name, it falls back to template mode and stores a note in `warning`.
/// Throws kRewriteTwice on an already rewritten query.
RetrievalQuery rewrite_query(const RetrievalQuery& query, RewriteMode mode, const LlmFn& llm = {},
                             std::string* warning = nullptr);

}  // namespace cfgrag::retrieval

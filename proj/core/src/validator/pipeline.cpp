// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/validator/pipeline.hpp"

#include <chrono>

#include "cfgrag/error.hpp"

namespace cfgrag::validator {

retrieval::ContextSlots retrieve_context(const confignet::DependencyCandidate& candidate,
                                         const corpus::HybridStore& store, const RetrievalSettings& rag,
                                         gateway::ChatClient* rewrite_client, std::vector<std::string>& warnings) {
  if (!rag.provider) throw Error(ErrorCode::kInvalidArgument, "retrieval settings lack an embedding provider");

  retrieval::LlmFn llm;
  if (rewrite_client) {
    llm = [rewrite_client](const std::string& instruction) {
      const std::vector<gateway::ChatMessage> msgs{{"user", instruction}};
      return rewrite_client->complete(msgs).text;
    };
  }
  std::string warning;
  const auto query = retrieval::rewrite_query(retrieval::build_query(candidate), rag.rewrite, llm, &warning);
  if (!warning.empty()) warnings.push_back(warning);

  corpus::ChunkFilter filter;
  if (rag.scope_dynamic) {
    filter = [id = candidate.id](const corpus::ChunkMetadata& m) { return !m.candidate_id || *m.candidate_id == id; };
  }
  auto ranked = retrieval::hybrid_search(store, query, *rag.provider, rag.search, filter);
  ranked = retrieval::rerank(std::move(ranked), query, rag.reranker, *rag.provider, store);
  return retrieval::select_context(ranked, rag.top_n, store);
}

ValidationRecord validate_candidate(const confignet::DependencyCandidate& candidate, corpus::HybridStore* store,
                                    const ValidationSettings& settings, gateway::ChatClient& client) {
  const auto start = std::chrono::steady_clock::now();
  ValidationRecord rec;
  rec.candidate_id = candidate.id;
  rec.model_id = client.config().model_id;
  rec.rag_variant_id = settings.rag ? settings.rag->variant_id : std::string(kVanillaId);

  if (settings.rag) {
    const auto& rag = *settings.rag;
    if (!store) throw Error(ErrorCode::kEmptyStore, "RAG validation needs a store");
    if (rag.dynamic_context && rag.ingest_inline) {
      if (!rag.search_client) {
        rec.warnings.push_back("dynamic context enabled without a search client");
      } else {
        try {
          retrieval::dynamic_ingest(candidate, *rag.search_client, *store, *rag.provider, rag.chunker);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kSearchUnavailable) throw;
          rec.warnings.push_back(std::string("static context only: ") + e.what());
        }
      }
    }
    const auto pre = settings.contexts ? settings.contexts->find(candidate.id) : decltype(settings.contexts->end()){};
    if (settings.contexts && pre != settings.contexts->end()) {
      rec.context = pre->second;
    } else {
      rec.context = retrieve_context(candidate, *store, rag,
                                     rag.rewrite == retrieval::RewriteMode::kLlm ? &client : nullptr, rec.warnings);
    }
  }

  std::vector<ShotExample> shots;
  if (settings.shots > 0) {
    if (!settings.shot_pool || !settings.shot_provider) {
      throw Error(ErrorCode::kInvalidArgument, "shots requested without a shot pool and provider");
    }
    shots = select_shots(candidate, *settings.shot_pool, *settings.shot_provider, settings.shots);
  }

  const auto& templates = settings.templates ? *settings.templates : TemplateSet::embedded();
  const auto prompt = build_prompt(candidate, rec.context, settings.prompt_variant, shots, templates);
  auto messages = prompt.messages();
  rec.prompt_sha256 = prompt.sha256();

  ++rec.model_calls;
  rec.verdict = parse_verdict(client.complete(messages).text);
  if (rec.verdict.parse_status == ParseStatus::kDefaulted) {
    messages.back().content += "\n\n";
    messages.back().content += kRetryLine;
    ++rec.model_calls;
    rec.verdict = parse_verdict(client.complete(messages).text);
  }

  rec.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace cfgrag::validator

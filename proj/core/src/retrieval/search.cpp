// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/retrieval/search.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::retrieval {

namespace {

void renumber(std::vector<RankedChunk>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i].final_rank = static_cast<int>(i) + 1;
}

std::map<std::string, double> min_max(const std::vector<corpus::ScoredChunk>& leg) {
  std::map<std::string, double> out;
  if (leg.empty()) return out;
  const auto [lo, hi] = std::minmax_element(leg.begin(), leg.end(), [](const auto& a, const auto& b) {
    return a.score < b.score;
  });
  const double span = hi->score - lo->score;
  for (const auto& s : leg) out[s.chunk_id] = span > 0.0 ? (s.score - lo->score) / span : 1.0;
  return out;
}

}  // namespace

double rrf_term(int rank, double k_rrf) noexcept { return 1.0 / (k_rrf + static_cast<double>(rank)); }

std::vector<RankedChunk> hybrid_search(const corpus::HybridStore& store, const RetrievalQuery& query,
                                       const corpus::EmbeddingProvider& provider, const SearchConfig& cfg,
                                       const corpus::ChunkFilter& filter) {
  if (store.empty()) throw Error(ErrorCode::kEmptyStore, "hybrid search on an empty store");

  const auto qvec = corpus::embed_one(query.semantic_text, provider);
  const auto dense = store.dense_search(qvec, cfg.k_dense, filter);
  const auto terms = corpus::analyze_query_terms(query.keyword_terms);
  const auto sparse = store.sparse_search(terms, cfg.k_sparse, filter);

  std::map<std::string, RankedChunk> merged;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    auto& r = merged[dense[i].chunk_id];
    r.chunk_id = dense[i].chunk_id;
    r.dense_rank = static_cast<int>(i) + 1;
  }
  for (std::size_t i = 0; i < sparse.size(); ++i) {
    auto& r = merged[sparse[i].chunk_id];
    r.chunk_id = sparse[i].chunk_id;
    r.sparse_rank = static_cast<int>(i) + 1;
  }

  if (cfg.fusion.kind == FusionKind::kReciprocalRank) {
    for (auto& [_, r] : merged) {
      double s = 0.0;
      if (r.dense_rank) s += rrf_term(*r.dense_rank, cfg.fusion.k_rrf);
      if (r.sparse_rank) s += rrf_term(*r.sparse_rank, cfg.fusion.k_rrf);
      r.fused_score = s;
    }
  } else {
    const auto nd = min_max(dense);
    const auto ns = min_max(sparse);
    for (auto& [id, r] : merged) {
      const auto d = nd.find(id);
      const auto s = ns.find(id);
      r.fused_score = cfg.fusion.alpha * (d == nd.end() ? 0.0 : d->second) +
                      (1.0 - cfg.fusion.alpha) * (s == ns.end() ? 0.0 : s->second);
    }
  }

  std::vector<RankedChunk> out;
  out.reserve(merged.size());
  for (auto& [_, r] : merged) out.push_back(std::move(r));
  // merged is keyed by chunk_id, so a stable sort leaves ties in id order.
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedChunk& a, const RankedChunk& b) { return a.fused_score > b.fused_score; });
  renumber(out);
  return out;
}

std::string_view to_string(RerankerKind kind) noexcept {
  switch (kind) {
    case RerankerKind::kLateInteractionMaxSim: return "late_interaction_maxsim";
    case RerankerKind::kEmbeddingSimilarity: return "embedding_similarity";
    case RerankerKind::kNone: return "none";
  }
  return "none";
}

RerankerKind parse_reranker_kind(std::string_view name) {
  for (auto k : {RerankerKind::kLateInteractionMaxSim, RerankerKind::kEmbeddingSimilarity, RerankerKind::kNone}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown reranker " + std::string(name));
}

double maxsim(std::span<const corpus::Embedding> query_tokens, std::span<const corpus::Embedding> doc_tokens) {
  double total = 0.0;
  for (const auto& q : query_tokens) {
    if (doc_tokens.empty()) break;
    double best = -1.0;
    for (const auto& d : doc_tokens) best = std::max(best, corpus::cosine(q, d));
    total += best;
  }
  return total;
}

namespace {

class TokenEmbeddings {
 public:
  explicit TokenEmbeddings(const corpus::EmbeddingProvider& p) : provider_(p) {}

  std::vector<corpus::Embedding> of(std::string_view text) {
    const auto tokens = util::split_whitespace(text);
    std::vector<std::string> missing;
    for (const auto& t : tokens) {
      if (!cache_.count(t) && std::find(missing.begin(), missing.end(), t) == missing.end()) missing.push_back(t);
    }
    if (!missing.empty()) {
      auto vecs = corpus::embed_batch(missing, provider_);
      for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(missing[i], std::move(vecs[i]));
    }
    std::vector<corpus::Embedding> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(cache_.at(t));
    return out;
  }

  const corpus::Embedding& at(const std::string& token) const { return cache_.at(token); }

 private:
  const corpus::EmbeddingProvider& provider_;
  std::unordered_map<std::string, corpus::Embedding> cache_;
};

}  // namespace

std::vector<RankedChunk> rerank(std::vector<RankedChunk> candidates, const RetrievalQuery& query, RerankerKind kind,
                                const corpus::EmbeddingProvider& provider, const corpus::HybridStore& store) {
  if (kind == RerankerKind::kNone || candidates.empty()) {
    renumber(candidates);
    return candidates;
  }

  if (kind == RerankerKind::kLateInteractionMaxSim) {
    // Same result as maxsim() over the raw token lists; cosines are memoized
    // per (query token, doc token) since chunks share most of their vocabulary.
    TokenEmbeddings cache(provider);
    cache.of(query.semantic_text);
    const auto q_tokens = util::split_whitespace(query.semantic_text);
    std::map<std::pair<std::string, std::string>, double> memo;
    for (auto& c : candidates) {
      const auto chunk = store.get(c.chunk_id);
      if (!chunk) throw Error(ErrorCode::kUnknownChunk, "no chunk " + c.chunk_id);
      cache.of(chunk->text);
      auto d_tokens = util::split_whitespace(chunk->text);
      std::sort(d_tokens.begin(), d_tokens.end());
      d_tokens.erase(std::unique(d_tokens.begin(), d_tokens.end()), d_tokens.end());
      std::unordered_map<std::string, double> best_of;
      double total = 0.0;
      for (const auto& qt : q_tokens) {
        if (d_tokens.empty()) break;
        auto it = best_of.find(qt);
        if (it == best_of.end()) {
          double best = -1.0;
          for (const auto& dt : d_tokens) {
            auto [m, fresh] = memo.try_emplace({qt, dt}, 0.0);
            if (fresh) m->second = corpus::cosine(cache.at(qt), cache.at(dt));
            best = std::max(best, m->second);
          }
          it = best_of.emplace(qt, best).first;
        }
        total += it->second;
      }
      c.rerank_score = total;
    }
  } else {
    const auto q = corpus::embed_one(query.semantic_text, provider);
    for (auto& c : candidates) {
      const auto chunk = store.get(c.chunk_id);
      if (!chunk) throw Error(ErrorCode::kUnknownChunk, "no chunk " + c.chunk_id);
      c.rerank_score = corpus::cosine(q, chunk->embedding);
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(), [](const RankedChunk& a, const RankedChunk& b) {
    if (*a.rerank_score != *b.rerank_score) return *a.rerank_score > *b.rerank_score;
    if (a.fused_score != b.fused_score) return a.fused_score > b.fused_score;
    return a.chunk_id < b.chunk_id;
  });
  renumber(candidates);
  return candidates;
}

ContextSlots select_context(std::span<const RankedChunk> ranked, std::size_t top_n, const corpus::HybridStore& store) {
  std::vector<const RankedChunk*> order;
  for (const auto& r : ranked) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->final_rank < b->final_rank; });

  ContextSlots out;
  out.top_n = top_n;
  for (const auto* r : order) {
    if (out.slots.size() >= top_n) break;
    const bool seen = std::any_of(out.slots.begin(), out.slots.end(),
                                  [&](const ContextSlot& s) { return s.chunk_id == r->chunk_id; });
    if (seen) continue;
    const auto chunk = store.get(r->chunk_id);
    if (!chunk) throw Error(ErrorCode::kUnknownChunk, "no chunk " + r->chunk_id);
    out.slots.push_back({chunk->chunk_id, chunk->metadata.source_kind, chunk->text});
  }
  return out;
}

}  // namespace cfgrag::retrieval

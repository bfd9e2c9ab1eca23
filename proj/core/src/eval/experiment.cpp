// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/eval/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "cfgrag/error.hpp"

namespace cfgrag::eval {

namespace {

using validator::ValidationRecord;

bool wanted(const std::vector<std::string>& filter, const std::string& id) {
  return filter.empty() || std::find(filter.begin(), filter.end(), id) != filter.end();
}

const corpus::EmbeddingProvider& provider_for(const ExperimentEnv& env, const EmbeddingSpec& spec) {
  const auto it = env.providers.find(spec.provider_id);
  if (it == env.providers.end() || !it->second) {
    throw Error(ErrorCode::kConfigError, "no embedding provider " + spec.provider_id);
  }
  if (it->second->dimension() != spec.dimension) {
    throw Error(ErrorCode::kConfigError, fmt::format("embedding provider {} has dimension {}, variant expects {}",
                                                     spec.provider_id, it->second->dimension(), spec.dimension));
  }
  return *it->second;
}

corpus::HybridStore& store_for(const ExperimentEnv& env, const EmbeddingSpec& spec) {
  const auto it = env.stores.find(spec.provider_id);
  if (it == env.stores.end() || !it->second) {
    throw Error(ErrorCode::kEmptyStore, "no store for embedding provider " + spec.provider_id);
  }
  return *it->second;
}

ValidationRecord defaulted_record(const LabeledDependency& item, const std::string& model_id,
                                  const std::string& rag_id, const std::string& error) {
  ValidationRecord r;
  r.candidate_id = item.candidate.id;
  r.model_id = model_id;
  r.rag_variant_id = rag_id;
  r.error = error;
  return r;
}

}  // namespace

RagVariant RagVariant::vanilla(validator::PromptVariant prompt, std::size_t shots) {
  RagVariant v;
  v.id = std::string(validator::kVanillaId);
  v.retrieval = false;
  v.top_n = 0;
  v.dynamic_context = false;
  v.prompt_variant = prompt;
  v.shots = shots;
  return v;
}

std::vector<RagVariant> studied_variants() {
  using retrieval::RerankerKind;
  auto make = [](std::string id, EmbeddingSpec e, RerankerKind r, std::size_t top_n) {
    RagVariant v;
    v.id = std::move(id);
    v.embedding = std::move(e);
    v.reranker = r;
    v.top_n = top_n;
    return v;
  };
  return {
      make("1", {"ada2", 1536}, RerankerKind::kLateInteractionMaxSim, 5),
      make("2", {"qwen2", 3584}, RerankerKind::kLateInteractionMaxSim, 5),
      make("3", {"qwen2", 3584}, RerankerKind::kEmbeddingSimilarity, 5),
      make("4", {"qwen2", 3584}, RerankerKind::kLateInteractionMaxSim, 3),
  };
}

std::vector<RagVariant> studied_conditions() {
  auto out = studied_variants();
  out.insert(out.begin(), RagVariant::vanilla());
  return out;
}

std::vector<std::string> studied_model_ids() {
  return {"gpt-4o-2024-05-13", "gpt-3.5-turbo-0125", "llama3:70b", "llama3:8b"};
}

std::vector<validator::ShotExample> build_shot_pool(std::span<const LabeledDependency> items,
                                                    const corpus::EmbeddingProvider& provider) {
  std::vector<validator::ShotExample> pool;
  std::vector<std::string> summaries;
  for (const auto& it : items) {
    if (it.split == Split::kHoldout) {
      throw Error(ErrorCode::kHoldoutViolation, "holdout item " + it.candidate.id + " cannot serve as a shot example");
    }
    validator::ShotExample s;
    s.id = it.candidate.id;
    s.summary = validator::candidate_summary(it.candidate);
    s.label = it.label;
    summaries.push_back(s.summary);
    pool.push_back(std::move(s));
  }
  if (pool.empty()) return pool;
  auto vecs = corpus::embed_batch(summaries, provider);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i].embedding = std::move(vecs[i]);
  return pool;
}

const CellResult* ExperimentResult::find(std::string_view rag_id, std::string_view model_id) const {
  for (const auto& c : cells) {
    if (c.rag_id == rag_id && c.model_id == model_id) return &c;
  }
  return nullptr;
}

std::optional<MeanRow> ExperimentResult::mean(std::string_view rag_id) const {
  MeanRow row;
  row.rag_id = std::string(rag_id);
  for (const auto& c : cells) {
    if (c.rag_id != rag_id || !c.complete || !c.metrics) continue;
    ++row.cells;
    row.failures += static_cast<double>(c.metrics->n_failures);
    row.precision += c.metrics->precision;
    row.recall += c.metrics->recall;
    row.f1 += c.metrics->f1;
  }
  if (row.cells == 0) return std::nullopt;
  const auto n = static_cast<double>(row.cells);
  row.failures /= n;
  row.precision /= n;
  row.recall /= n;
  row.f1 /= n;
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, ExperimentEnv& env) {
  if (!cfg.dataset) throw Error(ErrorCode::kConfigError, "experiment has no dataset");

  std::vector<const LabeledDependency*> items;
  for (const auto& it : cfg.dataset->items) {
    if (selects(cfg.split, it.split)) items.push_back(&it);
  }
  std::sort(items.begin(), items.end(),
            [](const auto* a, const auto* b) { return a->candidate.id < b->candidate.id; });

  std::vector<const RagVariant*> variants;
  std::set<std::string> seen_ids;
  for (const auto& v : cfg.variants) {
    if (!seen_ids.insert(v.id).second) throw Error(ErrorCode::kConfigError, "duplicate variant id " + v.id);
    if (wanted(cfg.only_variants, v.id)) variants.push_back(&v);
  }
  std::vector<const gateway::ModelConfig*> models;
  for (const auto& m : cfg.models) {
    m.validate();
    if (wanted(cfg.only_models, m.model_id)) models.push_back(&m);
  }

  ExperimentResult result;
  result.run_id = cfg.run_id;
  for (const auto* v : variants) result.rag_order.push_back(v->id);
  for (const auto* m : models) result.model_order.push_back(m->model_id);
  for (const auto* it : items) {
    result.labels[it->candidate.id] = it->label;
    result.splits[it->candidate.id] = it->split;
  }

  // Shot pool: benchmark items only, whatever split is evaluated.
  std::map<std::string, std::vector<validator::ShotExample>> shot_pools;  // by provider id
  auto shot_pool_for = [&](const corpus::EmbeddingProvider& p) -> const std::vector<validator::ShotExample>& {
    auto it = shot_pools.find(p.id());
    if (it != shot_pools.end()) return it->second;
    std::vector<LabeledDependency> pool_items;
    for (const auto& d : cfg.dataset->items) {
      if (d.split == Split::kBenchmark) pool_items.push_back(d);
    }
    return shot_pools.emplace(p.id(), build_shot_pool(pool_items, p)).first->second;
  };

  // Phase 1: dynamic web context, sequential and in candidate order.
  std::map<std::string, std::string> search_warnings;  // candidate id -> note
  std::set<std::string> ingested_providers;
  for (const auto* v : variants) {
    if (v->is_vanilla() || !v->dynamic_context) continue;
    if (!ingested_providers.insert(v->embedding.provider_id).second) continue;
    auto& store = store_for(env, v->embedding);
    const auto& provider = provider_for(env, v->embedding);
    for (const auto* it : items) {
      if (!env.search_client) {
        search_warnings[it->candidate.id] = "static context only: no search client configured";
        continue;
      }
      try {
        retrieval::dynamic_ingest(it->candidate, *env.search_client, store, provider, cfg.chunker);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSearchUnavailable) throw;
        search_warnings[it->candidate.id] = std::string("static context only: ") + e.what();
      }
    }
    if (env.progress) env.progress(fmt::format("dynamic context ingested for {} items ({})", items.size(), v->embedding.provider_id));
  }

  // Phase 2: cells.
  for (const auto* v : variants) {
    validator::ValidationSettings settings;
    settings.prompt_variant = v->prompt_variant;
    settings.shots = v->shots;
    settings.templates = env.templates;
    corpus::HybridStore* store = nullptr;
    const corpus::EmbeddingProvider* variant_provider = nullptr;
    if (!v->is_vanilla()) {
      store = &store_for(env, v->embedding);
      variant_provider = &provider_for(env, v->embedding);
      validator::RetrievalSettings rag;
      rag.variant_id = v->id;
      rag.provider = variant_provider;
      rag.search = cfg.search;
      rag.reranker = v->reranker;
      rag.top_n = v->top_n;
      rag.dynamic_context = v->dynamic_context;
      rag.ingest_inline = false;
      rag.scope_dynamic = cfg.scope_dynamic;
      rag.chunker = cfg.chunker;
      rag.rewrite = cfg.rewrite;
      settings.rag = rag;
    }
    if (v->shots > 0) {
      const auto* sp = env.shot_provider ? env.shot_provider : variant_provider;
      if (!sp) throw Error(ErrorCode::kConfigError, "variant " + v->id + " uses shots but no shot embedder is set");
      settings.shot_provider = sp;
      settings.shot_pool = &shot_pool_for(*sp);
    }

    // Template rewrite makes retrieval model-independent: do it once per variant.
    std::map<std::string, retrieval::ContextSlots> contexts;
    if (settings.rag && settings.rag->rewrite == retrieval::RewriteMode::kTemplate) {
      std::vector<retrieval::ContextSlots> found(items.size());
      std::atomic<std::size_t> next{0};
      std::mutex err_mu;
      std::exception_ptr fatal;
      auto worker = [&] {
        for (;;) {
          const auto i = next.fetch_add(1);
          if (i >= items.size()) return;
          try {
            std::vector<std::string> ignored;
            found[i] = validator::retrieve_context(items[i]->candidate, *store, *settings.rag, nullptr, ignored);
          } catch (...) {
            std::lock_guard lock(err_mu);
            if (!fatal) fatal = std::current_exception();
          }
        }
      };
      const auto n = std::min(std::max<std::size_t>(1, cfg.concurrency), std::max<std::size_t>(1, items.size()));
      std::vector<std::thread> threads;
      for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
      if (fatal) std::rethrow_exception(fatal);
      for (std::size_t i = 0; i < items.size(); ++i) contexts.emplace(items[i]->candidate.id, std::move(found[i]));
      settings.contexts = &contexts;
    }

    for (const auto* m : models) {
      CellResult cell;
      cell.rag_id = v->id;
      cell.model_id = m->model_id;

      gateway::ClientOptions opts;
      opts.cache = env.cache;
      opts.run_log = env.run_log;
      opts.max_in_flight = static_cast<int>(std::max<std::size_t>(1, cfg.concurrency));
      auto transport = env.transport_factory ? env.transport_factory(*m) : gateway::make_transport(*m);
      gateway::ChatClient client(*m, transport, opts);

      std::vector<std::optional<ValidationRecord>> slots(items.size());
      std::atomic<std::size_t> next{0};
      std::atomic<bool> abort{false};
      std::mutex err_mu;
      std::optional<std::string> unavailable;
      std::exception_ptr fatal;

      auto worker = [&] {
        for (;;) {
          if (abort.load()) return;
          const auto i = next.fetch_add(1);
          if (i >= items.size()) return;
          const auto& item = *items[i];
          try {
            auto rec = validator::validate_candidate(item.candidate, store, settings, client);
            if (settings.rag && settings.rag->dynamic_context) {
              if (auto w = search_warnings.find(item.candidate.id); w != search_warnings.end()) {
                rec.warnings.insert(rec.warnings.begin(), w->second);
              }
            }
            slots[i] = std::move(rec);
          } catch (const Error& e) {
            if (e.code() == ErrorCode::kContextTooLong) {
              slots[i] = defaulted_record(item, m->model_id, v->id, e.what());
            } else if (e.code() == ErrorCode::kProviderUnavailable) {
              std::lock_guard lock(err_mu);
              if (!unavailable) unavailable = e.what();
              abort = true;
            } else {
              std::lock_guard lock(err_mu);
              if (!fatal) fatal = std::current_exception();
              abort = true;
            }
          } catch (...) {
            std::lock_guard lock(err_mu);
            if (!fatal) fatal = std::current_exception();
            abort = true;
          }
        }
      };
      const auto n_threads = std::min(std::max<std::size_t>(1, cfg.concurrency), std::max<std::size_t>(1, items.size()));
      std::vector<std::thread> threads;
      for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
      if (fatal) std::rethrow_exception(fatal);

      for (auto& s : slots) {
        if (s) cell.records.push_back(std::move(*s));
      }
      if (unavailable) {
        cell.complete = false;
        cell.error = *unavailable;
      }
      cell.confusion = compute_confusion(cell.records, result.labels);
      if (cell.complete && cell.confusion.total() > 0) cell.metrics = compute_metrics(cell.confusion);
      std::vector<retrieval::ContextSlots> contexts;
      if (!v->is_vanilla()) {
        for (const auto& r : cell.records) contexts.push_back(r.context);
      }
      cell.slot_usage = retrieval::source_usage(contexts);
      if (env.progress) {
        env.progress(fmt::format("cell {} / {}: {} records{}", v->id, m->model_id, cell.records.size(),
                                 cell.complete ? "" : " (incomplete)"));
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

}  // namespace cfgrag::eval

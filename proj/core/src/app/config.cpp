// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/app/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cfgrag/confignet/normalize.hpp"
#include "cfgrag/corpus/document.hpp"
#include "cfgrag/error.hpp"

namespace cfgrag::app {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kConfigError, where.empty() ? what : where + ": " + what);
}

void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!node.IsMap()) bad(where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) bad(where, "unknown key '" + key + "'");
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& where) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    bad(where, "has the wrong type");
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, T& out, const std::string& where) {
  if (const auto n = parent[key]) out = scalar<T>(n, where.empty() ? key : where + "." + key);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

void read_path(const YAML::Node& parent, const char* key, fs::path& out, const fs::path& base,
               const std::string& where) {
  if (const auto n = parent[key]) out = resolve(base, scalar<std::string>(n, where.empty() ? key : where + "." + key));
}

std::vector<fs::path> read_paths(const YAML::Node& node, const fs::path& base, const std::string& where) {
  std::vector<fs::path> out;
  if (node.IsScalar()) {
    out.push_back(resolve(base, node.as<std::string>()));
  } else if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(resolve(base, scalar<std::string>(node[i], fmt::format("{}[{}]", where, i))));
    }
  } else {
    bad(where, "expected a path or a list of paths");
  }
  return out;
}

EmbeddingProviderConfig parse_provider(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"id", "dimension", "mode", "seed", "endpoint", "model", "api_key_env", "batch_size"}, where);
  EmbeddingProviderConfig p;
  read(n, "id", p.id, where);
  read(n, "dimension", p.dimension, where);
  std::string mode = "hash";
  read(n, "mode", mode, where);
  if (mode == "hash") p.mode = corpus::EmbeddingMode::kLocalHashFallback;
  else if (mode == "http") p.mode = corpus::EmbeddingMode::kRemoteHttp;
  else bad(where + ".mode", "must be hash or http");
  read(n, "seed", p.seed, where);
  read(n, "endpoint", p.endpoint, where);
  read(n, "model", p.model, where);
  read(n, "api_key_env", p.api_key_env, where);
  read(n, "batch_size", p.batch_size, where);
  if (p.id.empty()) bad(where, "id is required");
  if (p.dimension == 0) bad(where, "dimension must be positive");
  if (p.mode == corpus::EmbeddingMode::kRemoteHttp && p.endpoint.empty()) bad(where, "http mode needs an endpoint");
  return p;
}

gateway::ModelConfig parse_model(const YAML::Node& n, const std::string& where) {
  if (n.IsScalar()) {
    gateway::ModelConfig m;
    m.model_id = n.as<std::string>();
    return m;
  }
  check_keys(n,
             {"model_id", "provider", "endpoint", "api_key_env", "temperature", "max_tokens", "timeout_s", "retries",
              "context_length"},
             where);
  gateway::ModelConfig m;
  read(n, "model_id", m.model_id, where);
  std::string provider = "mock";
  read(n, "provider", provider, where);
  m.provider = gateway::parse_provider_kind(provider);
  read(n, "endpoint", m.endpoint, where);
  read(n, "api_key_env", m.api_key_env, where);
  read(n, "temperature", m.temperature, where);
  read(n, "max_tokens", m.max_tokens, where);
  long long timeout = m.timeout.count();
  read(n, "timeout_s", timeout, where);
  m.timeout = std::chrono::seconds(timeout);
  read(n, "retries", m.retries, where);
  if (const auto c = n["context_length"]) m.context_length = scalar<std::size_t>(c, where + ".context_length");
  return m;
}

eval::RagVariant parse_variant(const YAML::Node& n, const std::string& where) {
  if (n.IsScalar()) {
    const auto id = n.as<std::string>();
    if (id == validator::kVanillaId) return eval::RagVariant::vanilla();
    for (const auto& v : eval::studied_variants()) {
      if (v.id == id) return v;
    }
    bad(where, "unknown preset variant '" + id + "'");
  }
  check_keys(n, {"id", "embedding", "reranker", "top_n", "dynamic_context", "prompt_variant", "shots"}, where);
  eval::RagVariant v;
  read(n, "id", v.id, where);
  if (v.id.empty()) bad(where, "id is required");
  if (v.id == validator::kVanillaId) bad(where, "id w/o is reserved for the vanilla condition");
  std::string embedding;
  read(n, "embedding", embedding, where);
  if (embedding.empty()) bad(where, "embedding provider id is required");
  v.embedding.provider_id = embedding;
  std::string reranker = "late_interaction_maxsim";
  read(n, "reranker", reranker, where);
  try {
    v.reranker = retrieval::parse_reranker_kind(reranker);
  } catch (const Error&) {
    bad(where + ".reranker", "unknown reranker '" + reranker + "'");
  }
  read(n, "top_n", v.top_n, where);
  if (v.top_n == 0) bad(where + ".top_n", "must be positive");
  read(n, "dynamic_context", v.dynamic_context, where);
  std::string prompt = "base";
  read(n, "prompt_variant", prompt, where);
  v.prompt_variant = validator::parse_prompt_variant(prompt);
  read(n, "shots", v.shots, where);
  return v;
}

}  // namespace

RunConfig RunConfig::load(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigError, "config file " + file.string() + " not found");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), file.has_parent_path() ? file.parent_path() : fs::path("."));
}

RunConfig RunConfig::parse(std::string_view yaml_text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("config is not valid YAML: ") + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  check_keys(root,
             {"run_id", "project_roots", "stoplist", "corpus", "store_dir", "embedding", "models", "variants", "prompt",
              "datasets", "split", "output_dir", "concurrency", "search", "retrieval", "templates_dir", "cache",
              "record_wall_time"},
             "");

  RunConfig cfg;
  cfg.base_dir = base_dir;
  const auto& base = base_dir;
  read(root, "run_id", cfg.run_id, "");
  if (cfg.run_id.empty() || cfg.run_id.find_first_of("/\\") != std::string::npos || cfg.run_id == "." ||
      cfg.run_id == "..") {
    bad("run_id", "must be a plain directory name");
  }
  if (const auto n = root["project_roots"]) cfg.project_roots = read_paths(n, base, "project_roots");
  if (const auto s = root["stoplist"]) {
    check_keys(s, {"booleans", "values"}, "stoplist");
    read(s, "booleans", cfg.stoplist.exclude_booleans, "stoplist");
    if (const auto v = s["values"]) {
      if (!v.IsSequence()) bad("stoplist.values", "expected a list");
      // Given values replace the defaults; compared after normalization.
      cfg.stoplist.canonical_values.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto raw = scalar<std::string>(v[i], fmt::format("stoplist.values[{}]", i));
        cfg.stoplist.canonical_values.insert(confignet::normalize_value(raw).canonical);
      }
    }
  }

  if (const auto c = root["corpus"]) {
    check_keys(c, {"root", "manifest", "chunk_size", "overlap"}, "corpus");
    read_path(c, "root", cfg.corpus_root, base, "corpus");
    read_path(c, "manifest", cfg.corpus_manifest, base, "corpus");
    read(c, "chunk_size", cfg.chunker.chunk_size, "corpus");
    read(c, "overlap", cfg.chunker.overlap, "corpus");
    try {
      cfg.chunker.validate();
    } catch (const Error& e) {
      bad("corpus", e.what());
    }
    if (cfg.corpus_root.empty() && !cfg.corpus_manifest.empty()) cfg.corpus_root = cfg.corpus_manifest.parent_path();
  }
  read_path(root, "store_dir", cfg.store_dir, base, "");
  if (cfg.store_dir.empty()) cfg.store_dir = base / "store";

  if (const auto e = root["embedding"]) {
    check_keys(e, {"providers", "shot_provider"}, "embedding");
    if (const auto ps = e["providers"]) {
      if (!ps.IsSequence()) bad("embedding.providers", "expected a list");
      for (std::size_t i = 0; i < ps.size(); ++i) {
        cfg.embedding_providers.push_back(parse_provider(ps[i], fmt::format("embedding.providers[{}]", i)));
      }
    }
    if (const auto s = e["shot_provider"]) cfg.shot_embedding = scalar<std::string>(s, "embedding.shot_provider");
  }
  if (cfg.embedding_providers.empty()) {
    // Offline stand-ins with the studied models' dimensions.
    for (const auto& v : eval::studied_variants()) {
      if (cfg.find_provider(v.embedding.provider_id)) continue;
      EmbeddingProviderConfig p;
      p.id = v.embedding.provider_id;
      p.dimension = v.embedding.dimension;
      cfg.embedding_providers.push_back(p);
    }
  }
  std::set<std::string> provider_ids;
  for (const auto& p : cfg.embedding_providers) {
    if (!provider_ids.insert(p.id).second) bad("embedding.providers", "duplicate id '" + p.id + "'");
  }

  if (const auto ms = root["models"]) {
    if (!ms.IsSequence()) bad("models", "expected a list");
    for (std::size_t i = 0; i < ms.size(); ++i) cfg.models.push_back(parse_model(ms[i], fmt::format("models[{}]", i)));
  } else {
    for (const auto& id : eval::studied_model_ids()) {
      gateway::ModelConfig m;
      m.model_id = id;
      cfg.models.push_back(m);
    }
  }
  std::set<std::string> model_ids;
  for (const auto& m : cfg.models) {
    if (!model_ids.insert(m.model_id).second) bad("models", "duplicate model_id '" + m.model_id + "'");
    try {
      m.validate();
    } catch (const Error& e) {
      bad("models", e.what());
    }
  }

  if (const auto vs = root["variants"]) {
    if (!vs.IsSequence()) bad("variants", "expected a list");
    for (std::size_t i = 0; i < vs.size(); ++i) cfg.variants.push_back(parse_variant(vs[i], fmt::format("variants[{}]", i)));
  } else {
    cfg.variants = eval::studied_conditions();
  }
  if (const auto p = root["prompt"]) {
    check_keys(p, {"variant", "shots"}, "prompt");
    std::string variant = "base";
    std::size_t shots = 0;
    read(p, "variant", variant, "prompt");
    read(p, "shots", shots, "prompt");
    const auto pv = validator::parse_prompt_variant(variant);
    for (auto& v : cfg.variants) {
      v.prompt_variant = pv;
      v.shots = shots;
    }
  }
  std::set<std::string> variant_ids;
  for (const auto& v : cfg.variants) {
    if (!variant_ids.insert(v.id).second) bad("variants", "duplicate id '" + v.id + "'");
    if (v.shots != 0 && v.shots != 2) bad("variants", "shots must be 0 or 2 in variant '" + v.id + "'");
    if (v.is_vanilla()) continue;
    const auto* p = cfg.find_provider(v.embedding.provider_id);
    if (!p) bad("variants", "variant '" + v.id + "' uses unknown embedding provider '" + v.embedding.provider_id + "'");
    if (v.embedding.dimension == 0) {
      for (auto& w : cfg.variants) {
        if (w.id == v.id) w.embedding.dimension = p->dimension;
      }
    } else if (v.embedding.dimension != p->dimension) {
      bad("variants", fmt::format("variant '{}' expects dimension {}, provider '{}' has {}", v.id, v.embedding.dimension,
                                  p->id, p->dimension));
    }
  }
  if (cfg.shot_embedding && !cfg.find_provider(*cfg.shot_embedding)) {
    bad("embedding.shot_provider", "unknown provider '" + *cfg.shot_embedding + "'");
  }

  if (const auto d = root["datasets"]) cfg.datasets = read_paths(d, base, "datasets");
  if (const auto s = root["split"]) {
    try {
      cfg.split = eval::parse_split_selector(scalar<std::string>(s, "split"));
    } catch (const Error&) {
      bad("split", "must be benchmark, holdout or all");
    }
  }
  read_path(root, "output_dir", cfg.output_dir, base, "");
  if (cfg.output_dir.empty()) cfg.output_dir = base / "out";
  read(root, "concurrency", cfg.concurrency, "");
  if (cfg.concurrency == 0) bad("concurrency", "must be positive");

  if (const auto s = root["search"]) {
    check_keys(s, {"mode", "fixture_dir", "endpoint", "api_key_env"}, "search");
    std::string mode = "none";
    read(s, "mode", mode, "search");
    if (mode == "none") cfg.search.mode = SearchMode::kNone;
    else if (mode == "fixture") cfg.search.mode = SearchMode::kFixture;
    else if (mode == "http") cfg.search.mode = SearchMode::kHttp;
    else bad("search.mode", "must be none, fixture or http");
    read_path(s, "fixture_dir", cfg.search.fixture_dir, base, "search");
    read(s, "endpoint", cfg.search.endpoint, "search");
    read(s, "api_key_env", cfg.search.api_key_env, "search");
    if (cfg.search.mode == SearchMode::kFixture && cfg.search.fixture_dir.empty()) bad("search", "fixture mode needs fixture_dir");
    if (cfg.search.mode == SearchMode::kHttp && cfg.search.endpoint.empty()) bad("search", "http mode needs an endpoint");
  }

  if (const auto r = root["retrieval"]) {
    check_keys(r, {"k_dense", "k_sparse", "fusion", "k_rrf", "alpha", "rewrite", "scope_dynamic"}, "retrieval");
    read(r, "k_dense", cfg.retrieval.k_dense, "retrieval");
    read(r, "k_sparse", cfg.retrieval.k_sparse, "retrieval");
    std::string fusion = "rrf";
    read(r, "fusion", fusion, "retrieval");
    if (fusion == "rrf") cfg.retrieval.fusion.kind = retrieval::FusionKind::kReciprocalRank;
    else if (fusion == "weighted") cfg.retrieval.fusion.kind = retrieval::FusionKind::kWeighted;
    else bad("retrieval.fusion", "must be rrf or weighted");
    read(r, "k_rrf", cfg.retrieval.fusion.k_rrf, "retrieval");
    read(r, "alpha", cfg.retrieval.fusion.alpha, "retrieval");
    if (cfg.retrieval.fusion.alpha < 0.0 || cfg.retrieval.fusion.alpha > 1.0) bad("retrieval.alpha", "must be in [0, 1]");
    std::string rewrite = "template";
    read(r, "rewrite", rewrite, "retrieval");
    if (rewrite == "template") cfg.rewrite = retrieval::RewriteMode::kTemplate;
    else if (rewrite == "llm") cfg.rewrite = retrieval::RewriteMode::kLlm;
    else bad("retrieval.rewrite", "must be template or llm");
    read(r, "scope_dynamic", cfg.scope_dynamic, "retrieval");
  }

  if (const auto t = root["templates_dir"]) cfg.templates_dir = resolve(base, scalar<std::string>(t, "templates_dir"));
  if (const auto c = root["cache"]) {
    check_keys(c, {"enabled", "file"}, "cache");
    read(c, "enabled", cfg.cache_enabled, "cache");
    if (const auto f = c["file"]) cfg.cache_file = resolve(base, scalar<std::string>(f, "cache.file"));
  }
  read(root, "record_wall_time", cfg.record_wall_time, "");
  return cfg;
}

const gateway::ModelConfig* RunConfig::find_model(std::string_view id) const {
  for (const auto& m : models) {
    if (m.model_id == id) return &m;
  }
  return nullptr;
}

const eval::RagVariant* RunConfig::find_variant(std::string_view id) const {
  for (const auto& v : variants) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

const EmbeddingProviderConfig* RunConfig::find_provider(std::string_view id) const {
  for (const auto& p : embedding_providers) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

ProviderMap make_providers(const RunConfig& cfg, std::shared_ptr<net::HttpTransport> transport) {
  ProviderMap out;
  for (const auto& p : cfg.embedding_providers) {
    if (p.mode == corpus::EmbeddingMode::kLocalHashFallback) {
      out.emplace(p.id, std::make_unique<corpus::HashEmbedder>(p.id, p.dimension, p.seed));
    } else {
      corpus::RemoteEmbedderConfig rc;
      rc.id = p.id;
      rc.dimension = p.dimension;
      rc.endpoint = p.endpoint;
      rc.model = p.model;
      rc.api_key_env = p.api_key_env;
      rc.batch_size = p.batch_size;
      rc.max_in_flight = static_cast<int>(cfg.concurrency);
      out.emplace(p.id, std::make_unique<corpus::RemoteEmbedder>(rc, transport ? transport : net::make_default_transport()));
    }
  }
  return out;
}

fs::path store_path(const RunConfig& cfg, std::string_view provider_id) { return cfg.store_dir / std::string(provider_id); }

std::vector<IngestSummary> ingest(const RunConfig& cfg, const ProviderMap& providers) {
  if (cfg.corpus_manifest.empty()) throw Error(ErrorCode::kConfigError, "corpus.manifest is not set");
  const auto manifest = corpus::CorpusManifest::load(cfg.corpus_manifest);
  const auto loaded = corpus::load_corpus(cfg.corpus_root, manifest);

  std::vector<corpus::Chunk> chunks;
  for (const auto& doc : loaded.documents) {
    for (auto& c : corpus::chunk_document(doc, cfg.chunker)) chunks.push_back(std::move(c));
  }
  std::vector<std::string> texts;
  texts.reserve(chunks.size());
  for (const auto& c : chunks) texts.push_back(c.text);

  std::vector<IngestSummary> out;
  for (const auto& [id, provider] : providers) {
    IngestSummary s;
    s.provider_id = id;
    s.documents = loaded.documents.size();
    s.skipped_empty = loaded.skipped_empty;
    s.chunks = chunks.size();

    const auto dir = store_path(cfg, id);
    auto store = fs::exists(dir / "embeddings.bin") ? corpus::HybridStore::load(dir)
                                                   : corpus::HybridStore(provider->dimension());
    if (store.dimension() != provider->dimension()) {
      throw Error(ErrorCode::kDimensionMismatch, fmt::format("store {} has dimension {}, provider {} has {}",
                                                             dir.string(), store.dimension(), id, provider->dimension()));
    }
    auto batch = chunks;
    if (!texts.empty()) {
      auto vecs = corpus::embed_batch(texts, *provider);
      for (std::size_t i = 0; i < batch.size(); ++i) batch[i].embedding = std::move(vecs[i]);
    }
    s.upserts = store.upsert(std::move(batch));
    store.save(dir);
    out.push_back(s);
  }
  return out;
}

std::unique_ptr<retrieval::WebSearchClient> make_search_client(const RunConfig& cfg) {
  switch (cfg.search.mode) {
    case SearchMode::kNone: return nullptr;
    case SearchMode::kFixture: return std::make_unique<retrieval::FixtureSearchClient>(cfg.search.fixture_dir);
    case SearchMode::kHttp:
      return std::make_unique<retrieval::HttpSearchClient>(cfg.search.endpoint, cfg.search.api_key_env,
                                                           net::make_default_transport());
  }
  return nullptr;
}

}  // namespace cfgrag::app

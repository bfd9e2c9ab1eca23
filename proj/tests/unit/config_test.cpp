// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "cfgrag/app/config.hpp"
#include "cfgrag/confignet/normalize.hpp"
#include "expect_error.hpp"
#include "fixtures.hpp"

namespace cfgrag::app {
namespace {

using testing::code_of;
using testing::TempDir;

RunConfig parse(const std::string& yaml) { return RunConfig::parse(yaml, "/base"); }

TEST(RunConfig, Defaults) {
  const auto c = parse("run_id: r1\n");
  EXPECT_EQ(c.run_id, "r1");
  EXPECT_EQ(c.store_dir, std::filesystem::path("/base/store"));
  EXPECT_EQ(c.output_dir, std::filesystem::path("/base/out"));
  EXPECT_EQ(c.run_dir(), std::filesystem::path("/base/out/r1"));
  EXPECT_EQ(c.models.size(), 4u);
  EXPECT_EQ(c.variants.size(), 5u);
  ASSERT_TRUE(c.find_provider("ada2"));
  EXPECT_EQ(c.find_provider("qwen2")->dimension, 3584u);
  EXPECT_EQ(c.chunker.chunk_size, 512u);
  EXPECT_EQ(c.chunker.overlap, 50u);
  EXPECT_EQ(c.retrieval.k_dense, 50u);
  EXPECT_EQ(c.retrieval.fusion.k_rrf, 60.0);
  EXPECT_EQ(c.concurrency, 4u);
  EXPECT_TRUE(c.cache_enabled);
}

TEST(RunConfig, UnknownKeysRejectedAtEveryLevel) {
  for (const char* y : {"runid: x\n", "corpus: {chunksize: 3}\n", "retrieval: {k: 1}\n",
                        "models: [{model_id: llama3:8b, temp: 0}]\n",
                        "embedding: {providers: [{id: a, dimension: 8, colour: red}]}\n"}) {
    try {
      parse(y);
      ADD_FAILURE() << "accepted: " << y;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfigError);
      EXPECT_NE(std::string(e.what()).find("unknown key"), std::string::npos) << e.what();
    }
  }
}

TEST(RunConfig, RelativePathsResolveAgainstBase) {
  const auto c = parse(
      "corpus: {root: corpus, manifest: corpus/manifest.yml}\n"
      "datasets: [data/a.jsonl, /abs/b.jsonl]\n"
      "project_roots: proj\n");
  EXPECT_EQ(c.corpus_root, std::filesystem::path("/base/corpus"));
  EXPECT_EQ(c.corpus_manifest, std::filesystem::path("/base/corpus/manifest.yml"));
  ASSERT_EQ(c.datasets.size(), 2u);
  EXPECT_EQ(c.datasets[0], std::filesystem::path("/base/data/a.jsonl"));
  EXPECT_EQ(c.datasets[1], std::filesystem::path("/abs/b.jsonl"));
  EXPECT_EQ(c.project_roots.at(0), std::filesystem::path("/base/proj"));
}

TEST(RunConfig, ModelsAndVariants) {
  const auto c = parse(
      "embedding:\n"
      "  providers: [{id: small, dimension: 64}]\n"
      "models:\n"
      "  - llama3:8b\n"
      "  - {model_id: local, provider: http, endpoint: 'http://h/v1/chat/completions', context_length: 4096}\n"
      "variants:\n"
      "  - w/o\n"
      "  - {id: mine, embedding: small, reranker: embedding_similarity, top_n: 3, dynamic_context: false}\n"
      "prompt: {variant: refined, shots: 2}\n");
  ASSERT_EQ(c.models.size(), 2u);
  EXPECT_EQ(c.models[1].provider, gateway::ProviderKind::kHttp);
  ASSERT_TRUE(c.find_variant("mine"));
  const auto& v = *c.find_variant("mine");
  EXPECT_EQ(v.embedding.dimension, 64u);
  EXPECT_EQ(v.top_n, 3u);
  EXPECT_FALSE(v.dynamic_context);
  EXPECT_EQ(v.prompt_variant, validator::PromptVariant::kRefined);
  EXPECT_EQ(c.find_variant("w/o")->shots, 2u);
  EXPECT_FALSE(c.find_variant("1"));
}

TEST(RunConfig, SemanticErrors) {
  for (const char* y : {"models: [llama3:8b, llama3:8b]\n", "prompt: {shots: 1}\n",
                        "variants: [{id: x, embedding: nope}]\n", "search: {mode: carrier_pigeon}\n",
                        "retrieval: {fusion: max}\n", "concurrency: 0\n", "corpus: {chunk_size: 10, overlap: 10}\n",
                        "models: [{model_id: llama3:8b, temperature: 0.2}]\n", "variants: ['7']\n"}) {
    EXPECT_EQ(code_of([&] { parse(y); }), ErrorCode::kConfigError) << y;
  }
}

TEST(RunConfig, Stoplist) {
  EXPECT_EQ(parse("").stoplist.canonical_values, confignet::ValueStoplist::defaults().canonical_values);
  const auto c = parse("stoplist: {booleans: false, values: ['UTF-8', '08080']}\n");
  EXPECT_FALSE(c.stoplist.exclude_booleans);
  EXPECT_EQ(c.stoplist.canonical_values, (std::set<std::string>{"utf-8", "8080"}));
  EXPECT_FALSE(c.stoplist.excludes(confignet::normalize_value("localhost")));
  EXPECT_TRUE(c.stoplist.excludes(confignet::normalize_value("8080", "server.port")));
  EXPECT_EQ(code_of([] { parse("stoplist: {values: 1}\n"); }), ErrorCode::kConfigError);
  EXPECT_EQ(code_of([] { parse("stoplist: {extra: [a]}\n"); }), ErrorCode::kConfigError);
}

TEST(RunConfig, LoadFromFile) {
  TempDir dir;
  testing::write_file(dir / "run.yml", "run_id: f\noutput_dir: results\n");
  const auto c = RunConfig::load(dir / "run.yml");
  EXPECT_EQ(c.output_dir, dir / "results");
  EXPECT_NE(code_of([&] { RunConfig::load(dir / "missing.yml"); }), ErrorCode::kInvalidArgument);
}

TEST(RunConfig, ProvidersAndIngest) {
  TempDir work;
  const auto c = RunConfig::parse(testing::golden_config(work.path()), work.path());
  const auto providers = make_providers(c);
  ASSERT_EQ(providers.size(), 2u);
  EXPECT_EQ(providers.at("qwen2")->dimension(), 3584u);
  const auto first = ingest(c, providers);
  ASSERT_EQ(first.size(), 2u);
  for (const auto& s : first) {
    EXPECT_EQ(s.documents, 3u);
    EXPECT_EQ(s.chunks, 4u);
    EXPECT_EQ(s.upserts, (corpus::UpsertStats{4, 0}));
  }
  const auto again = ingest(c, providers);
  EXPECT_EQ(again[0].upserts, (corpus::UpsertStats{0, 4}));
  EXPECT_TRUE(std::filesystem::exists(store_path(c, "ada2") / "embeddings.bin"));
}

}  // namespace
}  // namespace cfgrag::app

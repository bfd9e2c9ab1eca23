// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cfgrag/corpus/store.hpp"
#include "cfgrag/retrieval/query.hpp"
#include "cfgrag/retrieval/search.hpp"
#include "cfgrag/retrieval/web.hpp"
#include "expect_error.hpp"
#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"

namespace cfgrag::retrieval {
namespace {

using confignet::make_candidate;
using confignet::make_option;
using confignet::Technology;
using corpus::HashEmbedder;
using corpus::SourceKind;
using testing::code_of;
using testing::port_candidate;
using testing::TempDir;
using testing::write_file;

corpus::Chunk make_chunk(const std::string& id, const std::string& text, const corpus::EmbeddingProvider& p,
                         SourceKind kind = SourceKind::kManual) {
  corpus::Chunk c;
  c.chunk_id = id;
  c.doc_id = id;
  c.text = text;
  c.metadata.source_kind = kind;
  c.embedding = corpus::embed_one(text, p);
  return c;
}

std::vector<RankedChunk> ranked_ids(const std::vector<std::string>& ids) {
  std::vector<RankedChunk> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    RankedChunk r;
    r.chunk_id = ids[i];
    r.dense_rank = static_cast<int>(i) + 1;
    r.fused_score = rrf_term(static_cast<int>(i) + 1, 60.0);
    r.final_rank = static_cast<int>(i) + 1;
    out.push_back(r);
  }
  return out;
}

TEST(BuildQuery, PortCandidate) {
  const auto q = build_query(port_candidate());
  EXPECT_NE(q.semantic_text.find("server.port"), std::string::npos);
  EXPECT_NE(q.semantic_text.find("EXPOSE"), std::string::npos);
  EXPECT_EQ(std::count(q.keyword_terms.begin(), q.keyword_terms.end(), "8080"), 1);
  EXPECT_FALSE(q.rewritten);
  EXPECT_EQ(q.semantic_text,
            "Do docker option EXPOSE (value 8080) and spring option server.port (value 8080) depend on each other?");
}

TEST(BuildQuery, DeduplicatesTechnologyAndName) {
  const auto c = make_candidate(make_option("p", "a/application.yml", Technology::Kind::kSpring, "server.port", "80", 1),
                                make_option("p", "b/application.yml", Technology::Kind::kSpring, "server.port", "80", 1));
  const auto q = build_query(c);
  EXPECT_EQ(q.keyword_terms, (std::vector<std::string>{"server.port", "80", "spring"}));
}

TEST(RewriteQuery, TemplateMode) {
  const auto c = make_candidate(make_option("p", "application.yml", Technology::Kind::kSpring, "server.port", "80", 1),
                                make_option("p", "docker-compose.yml", Technology::Kind::kDockerCompose,
                                            "services.web.ports[0]", "80", 1));
  const auto q = build_query(c);
  const auto r = rewrite_query(q, RewriteMode::kTemplate);
  EXPECT_TRUE(r.rewritten);
  EXPECT_TRUE(r.semantic_text.ends_with("configuration dependency"));
  EXPECT_EQ(r.semantic_text, rewrite_query(q, RewriteMode::kTemplate).semantic_text);
  EXPECT_NE(r.semantic_text.find("server.port"), std::string::npos);
  EXPECT_EQ(code_of([&] { rewrite_query(r, RewriteMode::kTemplate); }), ErrorCode::kRewriteTwice);
}

TEST(RewriteQuery, LlmModeFallsBack) {
  const auto q = build_query(port_candidate());
  std::string warning;
  const auto down = rewrite_query(
      q, RewriteMode::kLlm, [](const std::string&) -> std::string { throw Error(ErrorCode::kProviderUnavailable, "x"); },
      &warning);
  EXPECT_EQ(down.semantic_text, rewrite_query(q, RewriteMode::kTemplate).semantic_text);
  EXPECT_FALSE(warning.empty());

  warning.clear();
  const auto dropped = rewrite_query(q, RewriteMode::kLlm, [](const std::string&) { return "ports in docker"; }, &warning);
  EXPECT_TRUE(dropped.semantic_text.ends_with("configuration dependency"));
  EXPECT_FALSE(warning.empty());

  warning.clear();
  const std::string better = "How does Dockerfile EXPOSE relate to spring server.port?";
  const auto ok = rewrite_query(q, RewriteMode::kLlm, [&](const std::string&) { return better; }, &warning);
  EXPECT_TRUE(ok.rewritten);
  EXPECT_NE(ok.semantic_text.find("EXPOSE"), std::string::npos);
  EXPECT_TRUE(warning.empty());
}

TEST(Rrf, Arithmetic) {
  EXPECT_NEAR(rrf_term(1, 60) + rrf_term(3, 60), 1.0 / 61 + 1.0 / 63, 1e-15);
  EXPECT_NEAR(rrf_term(1, 60) + rrf_term(3, 60), 0.032266, 5e-7);
  EXPECT_DOUBLE_EQ(rrf_term(2, 60), 1.0 / 62);
}

TEST(RrfProperty, ImprovingARankNeverLowersTheScore) {
  testing::Gen g(8);
  for (int i = 0; i < 1000; ++i) {
    const int rank = g.integer(2, 100);
    const int better = g.integer(1, rank - 1);
    const double k = g.real(1.0, 100.0);
    EXPECT_GT(rrf_term(better, k), rrf_term(rank, k));
  }
}

TEST(HybridSearch, EmptyStoreAndSingleChunk) {
  const HashEmbedder e("h", 32);
  corpus::HybridStore store(32);
  RetrievalQuery q;
  q.semantic_text = "anything";
  q.keyword_terms = {"zzz"};
  EXPECT_EQ(code_of([&] { hybrid_search(store, q, e); }), ErrorCode::kEmptyStore);

  store.upsert({make_chunk("only", "unrelated words", e)});
  const auto r = hybrid_search(store, q, e);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].final_rank, 1);
  EXPECT_EQ(r[0].dense_rank, 1);
  EXPECT_FALSE(r[0].sparse_rank);
}

TEST(HybridSearch, FusedScoresFollowLegRanks) {
  const HashEmbedder e("h", 64);
  corpus::HybridStore store(64);
  store.upsert({make_chunk("a", "server port mapping", e), make_chunk("b", "docker expose", e),
                make_chunk("c", "maven version property", e)});
  RetrievalQuery q;
  q.semantic_text = "server port mapping";
  q.keyword_terms = {"expose"};
  const auto r = hybrid_search(store, q, e);
  ASSERT_EQ(r.size(), 3u);
  for (const auto& h : r) {
    ASSERT_TRUE(h.dense_rank || h.sparse_rank);
    double expect = 0.0;
    if (h.dense_rank) expect += 1.0 / (60 + *h.dense_rank);
    if (h.sparse_rank) expect += 1.0 / (60 + *h.sparse_rank);
    EXPECT_NEAR(h.fused_score, expect, 1e-12);
  }
  EXPECT_EQ(r[0].chunk_id, "b");  // dense and sparse
  const auto c = std::find_if(r.begin(), r.end(), [](const auto& h) { return h.chunk_id == "c"; });
  EXPECT_FALSE(c->sparse_rank);
}

TEST(HybridSearch, MatchesOracleOnSmallCorpora) {
  testing::Gen g(41);
  const HashEmbedder e("h", 32);
  for (int round = 0; round < 20; ++round) {
    corpus::HybridStore store(32);
    std::vector<corpus::Chunk> chunks;
    const auto n = g.size(1, 25);
    for (std::size_t i = 0; i < n; ++i) chunks.push_back(make_chunk("c" + std::to_string(i), g.text(1, 15), e));
    store.upsert(chunks);
    RetrievalQuery q;
    q.semantic_text = g.text(3, 10);
    q.keyword_terms = {g.word(), g.word()};
    SearchConfig cfg;
    cfg.k_dense = g.size(1, 10);
    cfg.k_sparse = g.size(1, 10);
    const auto got = hybrid_search(store, q, e, cfg);
    const auto want = testing::oracle_hybrid_rrf(chunks, q, e, cfg.k_dense, cfg.k_sparse, 60.0);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].chunk_id, want[i].chunk_id);
      EXPECT_NEAR(got[i].fused_score, want[i].fused, 1e-12);
    }
  }
}

TEST(HybridSearch, WeightedFusionIsBounded) {
  const HashEmbedder e("h", 32);
  corpus::HybridStore store(32);
  store.upsert({make_chunk("a", "server port", e), make_chunk("b", "docker expose port", e),
                make_chunk("c", "maven", e)});
  RetrievalQuery q;
  q.semantic_text = "port";
  q.keyword_terms = {"port"};
  SearchConfig cfg;
  cfg.fusion.kind = FusionKind::kWeighted;
  cfg.fusion.alpha = 0.3;
  for (const auto& h : hybrid_search(store, q, e, cfg)) {
    EXPECT_GE(h.fused_score, 0.0);
    EXPECT_LE(h.fused_score, 1.0 + 1e-12);
  }
}

TEST(Rerank, MaxSimHandExample) {
  const std::vector<corpus::Embedding> q{{1, 0}, {0, 1}};
  const std::vector<corpus::Embedding> d{{1, 0}, {0.6f, 0.8f}};
  EXPECT_NEAR(maxsim(q, d), 1.8, 1e-6);
  EXPECT_NEAR(maxsim(q, d), testing::oracle_maxsim(q, d), 1e-12);
  EXPECT_EQ(maxsim(q, {}), 0.0);
}

TEST(Rerank, NoneKeepsOrderAndSingleIsIdentity) {
  const HashEmbedder e("h", 32);
  corpus::HybridStore store(32);
  store.upsert({make_chunk("x", "docker expose", e), make_chunk("y", "server port", e), make_chunk("z", "maven", e)});
  RetrievalQuery q;
  q.semantic_text = "server port";
  const auto in = ranked_ids({"z", "x", "y"});
  const auto out = rerank(in, q, RerankerKind::kNone, e, store);
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out[i].chunk_id, in[i].chunk_id);
    EXPECT_EQ(out[i].final_rank, static_cast<int>(i) + 1);
  }
  for (auto kind : {RerankerKind::kLateInteractionMaxSim, RerankerKind::kEmbeddingSimilarity}) {
    const auto one = rerank(ranked_ids({"x"}), q, kind, e, store);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].final_rank, 1);
    EXPECT_TRUE(one[0].rerank_score);
  }
}

TEST(Rerank, MaxSimMatchesTokenOracle) {
  const HashEmbedder e("h", 48);
  corpus::HybridStore store(48);
  const std::vector<std::string> texts{"server port 8080 server", "docker expose port", "maven version version"};
  for (std::size_t i = 0; i < texts.size(); ++i) store.upsert({make_chunk("c" + std::to_string(i), texts[i], e)});
  RetrievalQuery q;
  q.semantic_text = "server port port";
  const auto embed_tokens = [&](const std::string& t) {
    std::vector<corpus::Embedding> out;
    std::istringstream in(t);
    for (std::string w; in >> w;) out.push_back(e.embed_text(w));
    return out;
  };
  const auto out = rerank(ranked_ids({"c0", "c1", "c2"}), q, RerankerKind::kLateInteractionMaxSim, e, store);
  for (const auto& r : out) {
    const auto text = store.get(r.chunk_id)->text;
    EXPECT_NEAR(*r.rerank_score, testing::oracle_maxsim(embed_tokens(q.semantic_text), embed_tokens(text)), 1e-9);
  }
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GE(*out[i - 1].rerank_score, *out[i].rerank_score);
}

TEST(RerankProperty, OutputIsAPermutation) {
  testing::Gen g(77);
  const HashEmbedder e("h", 16);
  for (int round = 0; round < 50; ++round) {
    corpus::HybridStore store(16);
    std::vector<std::string> ids;
    const auto n = g.size(1, 12);
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("c" + std::to_string(i));
      store.upsert({make_chunk(ids.back(), g.text(1, 8), e)});
    }
    std::shuffle(ids.begin(), ids.end(), g.engine());
    RetrievalQuery q;
    q.semantic_text = g.text(1, 6);
    const auto kind = g.pick(std::vector<RerankerKind>{RerankerKind::kLateInteractionMaxSim,
                                                       RerankerKind::kEmbeddingSimilarity, RerankerKind::kNone});
    const auto out = rerank(ranked_ids(ids), q, kind, e, store);
    std::multiset<std::string> a(ids.begin(), ids.end());
    std::multiset<std::string> b;
    std::set<int> ranks;
    for (const auto& r : out) {
      b.insert(r.chunk_id);
      ranks.insert(r.final_rank);
    }
    EXPECT_EQ(a, b);
    EXPECT_EQ(ranks.size(), out.size());
    EXPECT_EQ(*ranks.begin(), 1);
    EXPECT_EQ(*ranks.rbegin(), static_cast<int>(out.size()));
  }
}

TEST(SelectContext, TopNAndPrefix) {
  const HashEmbedder e("h", 16);
  corpus::HybridStore store(16);
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) {
    ids.push_back("c" + std::to_string(i));
    store.upsert({make_chunk(ids.back(), "text " + std::to_string(i), e,
                             i % 2 ? SourceKind::kWebSearch : SourceKind::kStackOverflow)});
  }
  const auto ranked = ranked_ids(ids);
  const auto five = select_context(ranked, 5, store);
  const auto three = select_context(ranked, 3, store);
  ASSERT_EQ(five.slots.size(), 5u);
  ASSERT_EQ(three.slots.size(), 3u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(five.slots[i].chunk_id, ids[i]);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(three.slots[i].chunk_id, five.slots[i].chunk_id);
  EXPECT_EQ(five.slots[1].source_kind, SourceKind::kWebSearch);

  const auto two = ranked_ids({"c0", "c1"});
  EXPECT_EQ(select_context(two, 3, store).slots.size(), 2u);
}

TEST(FixtureSearch, FilesAndFailures) {
  TempDir dir;
  const std::string query = "Do x option a (value 1) and y option b (value 1) depend on each other?";
  EXPECT_EQ(FixtureSearchClient::fixture_name(query).size(), 21u);  // 16 hex + ".json"
  FixtureSearchClient client(dir.path());
  EXPECT_TRUE(client.search(query, 3).empty());

  nlohmann::json j;
  j["query"] = query;
  for (int i = 0; i < 4; ++i) j["results"].push_back({{"url", "u" + std::to_string(i)}, {"title", "t"}, {"text", "x"}});
  write_file(dir / FixtureSearchClient::fixture_name(query), j.dump());
  const auto r = client.search(query, 3);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[2].url, "u2");

  write_file(dir / FixtureSearchClient::fixture_name("bad"), "{not json");
  EXPECT_EQ(code_of([&] { client.search("bad", 3); }), ErrorCode::kSearchUnavailable);
  FixtureSearchClient nowhere(dir / "missing");
  EXPECT_EQ(code_of([&] { nowhere.search(query, 3); }), ErrorCode::kSearchUnavailable);
}

class FailingSearch final : public WebSearchClient {
 public:
  std::vector<SearchResult> search(const std::string&, std::size_t) override {
    throw Error(ErrorCode::kSearchUnavailable, "down");
  }
};

TEST(DynamicIngest, FirstThreeResultsTaggedByCandidate) {
  TempDir dir;
  const auto cand = port_candidate();
  const auto query = build_query(cand).semantic_text;
  nlohmann::json j;
  j["query"] = query;
  for (int i = 0; i < 4; ++i) {
    j["results"].push_back({{"url", "https://example.org/" + std::to_string(i)},
                            {"title", "page " + std::to_string(i)},
                            {"text", "EXPOSE 8080 and server.port page " + std::to_string(i)}});
  }
  write_file(dir / FixtureSearchClient::fixture_name(query), j.dump());
  FixtureSearchClient client(dir.path());
  const HashEmbedder e("h", 32);
  corpus::HybridStore store(32);
  const auto stats = dynamic_ingest(cand, client, store, e);
  EXPECT_EQ(stats, (corpus::UpsertStats{3, 0}));
  for (const auto& id : store.chunk_ids()) {
    const auto c = store.get(id);
    EXPECT_EQ(c->metadata.source_kind, SourceKind::kWebSearch);
    EXPECT_EQ(c->metadata.candidate_id, cand.id);
    EXPECT_TRUE(id.starts_with("web/" + cand.id + "/"));
  }
  EXPECT_EQ(dynamic_ingest(cand, client, store, e), (corpus::UpsertStats{0, 3}));
}

TEST(DynamicIngest, NoResultsAndFailure) {
  TempDir dir;
  FixtureSearchClient empty(dir.path());
  const HashEmbedder e("h", 32);
  corpus::HybridStore store(32);
  EXPECT_EQ(dynamic_ingest(port_candidate(), empty, store, e).inserted, 0u);
  FailingSearch down;
  EXPECT_EQ(code_of([&] { dynamic_ingest(port_candidate(), down, store, e); }), ErrorCode::kSearchUnavailable);
}

TEST(SourceUsage, Fractions) {
  EXPECT_TRUE(source_usage({}).rows.empty());

  ContextSlots a;
  a.top_n = 3;
  a.slots = {{"1", SourceKind::kManual, ""}, {"2", SourceKind::kWebSearch, ""}};
  ContextSlots b;
  b.top_n = 3;
  b.slots = {{"3", SourceKind::kWebSearch, ""}};
  const std::vector<ContextSlots> both{a, b};
  const auto t = source_usage(both);
  std::map<std::pair<std::size_t, SourceKind>, double> f;
  for (const auto& r : t.rows) f[{r.slot, r.source_kind}] = r.fraction;
  EXPECT_DOUBLE_EQ((f[{1, SourceKind::kManual}]), 0.5);
  EXPECT_DOUBLE_EQ((f[{1, SourceKind::kWebSearch}]), 0.5);
  EXPECT_DOUBLE_EQ((f[{2, SourceKind::kWebSearch}]), 1.0);
  ASSERT_GE(t.fill.size(), 2u);
  EXPECT_DOUBLE_EQ(t.fill[0].fill_rate(), 1.0);
  EXPECT_DOUBLE_EQ(t.fill[1].fill_rate(), 0.5);

  const std::vector<ContextSlots> web{b, b};
  const auto w = source_usage(web);
  ASSERT_EQ(w.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(w.rows[0].fraction, 1.0);
}

}  // namespace
}  // namespace cfgrag::retrieval

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails, except those marked known-unattainable.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "cfgrag/app/config.hpp"
#include "cfgrag/confignet/detect.hpp"
#include "cfgrag/confignet/parse.hpp"
#include "cfgrag/corpus/chunk.hpp"
#include "cfgrag/corpus/document.hpp"
#include "cfgrag/error.hpp"
#include "cfgrag/eval/dataset.hpp"
#include "cfgrag/eval/experiment.hpp"
#include "cfgrag/eval/metrics.hpp"
#include "cfgrag/eval/report.hpp"
#include "cfgrag/retrieval/search.hpp"
#include "cfgrag/validator/pipeline.hpp"
#include "cfgrag/validator/prompt.hpp"
#include "cfgrag/validator/verdict.hpp"
#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "published_tables.hpp"

namespace fs = std::filesystem;
using namespace cfgrag;
using namespace cfgrag::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

// 1 -------------------------------------------------------------------------

Outcome published_tables() {
  std::vector<std::string> off;
  int checked = 0;
  auto check = [&](const PublishedRow& r, const char* table) {
    ++checked;
    const double f1 = eval::f1_score(r.precision, r.recall);
    if (std::abs(f1 - oracle_f1(r.precision, r.recall)) > 1e-12) off.push_back("f1_score disagrees with oracle");
    if (std::abs(f1 - r.f1) > 0.01) {
      off.push_back(fmt::format("{} {} {}: P={:.2f} R={:.2f} gives F1={:.4f}, printed {:.2f}", table, r.rag_id, r.model,
                                r.precision, r.recall, f1, r.f1));
    }
  };
  for (const auto& r : kBenchmarkRows) check(r, "benchmark");
  for (const auto& r : kHoldoutRows) check(r, "holdout");
  if (std::abs(eval::f1_score(0.89, 0.62) - 0.73) > 0.01) off.push_back("0.89/0.62 example");
  if (!off.empty()) {
    std::string detail = fmt::format("{}/{} rows within 0.01; ", checked - static_cast<int>(off.size()), checked);
    for (std::size_t i = 0; i < off.size(); ++i) detail += (i ? "; " : "") + off[i];
    return fail(detail);
  }
  return {true, fmt::format("{} rows recomputed within 0.01", checked)};
}

// 2 -------------------------------------------------------------------------

Outcome golden_benchmark() {
  const auto dataset = eval::load_dataset(data_dir() / "golden" / "dataset.jsonl");
  if (dataset.items.size() != 12) return fail("golden dataset must hold 12 items");

  // Hand-derived matrix, cross-checked against the restated mock rule.
  const eval::ConfusionMatrix expected{4, 2, 3, 3, 0};
  eval::ConfusionMatrix oracle{};
  for (const auto& it : dataset.items) {
    const bool pred = oracle_mock_rule(it.candidate.option_a, it.candidate.option_b);
    if (pred && it.label) ++oracle.tp;
    else if (pred) ++oracle.fp;
    else if (it.label) ++oracle.fn;
    else ++oracle.tn;
  }
  if (!(oracle == expected)) return fail("oracle mock rule disagrees with the hand-derived matrix");

  TempDir work("cfgrag-golden");
  write_file(work / "run.yml", golden_config(work.path()));
  const auto cfg_path = (work / "run.yml").string();
  if (const auto r = run_cli({"ingest", "-c", cfg_path}); r.code != 0) return fail("ingest failed: " + r.err);

  std::string first;
  for (int pass = 0; pass < 2; ++pass) {
    const auto r = run_cli({"evaluate", "-c", cfg_path});
    if (r.code != 0) return fail("evaluate failed: " + r.err);
    const auto md = read_file(work / "out" / "golden" / "metrics.md");
    if (pass == 0) first = md;
    else if (md != first) return fail("metrics.md differs between consecutive runs");
  }
  const auto result = eval::load_result(work / "out" / "golden");
  if (result.cells.size() != 20) return fail(fmt::format("expected 20 cells, got {}", result.cells.size()));
  for (const auto& c : result.cells) {
    if (!(c.confusion == expected)) {
      return fail(fmt::format("cell {}/{}: tp={} fp={} fn={} tn={}", c.rag_id, c.model_id, c.confusion.tp,
                              c.confusion.fp, c.confusion.fn, c.confusion.tn));
    }
  }
  const auto golden = data_dir() / "golden" / "metrics.md";
  if (update_goldens()) write_file(golden, first);
  if (read_file(golden) != first) return fail("metrics.md differs from the frozen golden");
  return {true, "20 cells at tp=4 fp=2 fn=3 tn=3, metrics.md byte-identical"};
}

// 3 -------------------------------------------------------------------------

Outcome chunker() {
  const corpus::ChunkerConfig cfg{512, 50};
  const auto spans = corpus::window_spans(1000, cfg);
  if (spans.size() != 3 || spans[0].first != 0 || spans[1].first != 462 || spans[2].first != 924) {
    return fail("1000-token document must give starts {0, 462, 924}");
  }
  std::string text;
  for (int i = 0; i < 1000; ++i) text += fmt::format("t{} ", i);
  corpus::Document doc;
  doc.doc_id = "d";
  doc.text = text;
  const auto chunks = corpus::chunk_document(doc, cfg);
  if (chunks.size() != 3 || chunks[2].token_begin != 924 || chunks[2].token_end != 1000) return fail("chunk_document");

  Gen g(3);
  for (int i = 0; i < 1000; ++i) {
    const auto n = g.size(1, 6000);
    const auto got = corpus::window_spans(n, cfg);
    if (got != oracle_windows(n, 512, 50)) return fail(fmt::format("n={}: windows differ from oracle", n));
    if (got.front().first != 0 || got.back().second != n) return fail(fmt::format("n={}: coverage", n));
    for (std::size_t k = 0; k + 1 < got.size(); ++k) {
      if (got[k].second - got[k + 1].first != 50) return fail(fmt::format("n={}: overlap at window {}", n, k));
      if (got[k].second - got[k].first != 512) return fail(fmt::format("n={}: short inner window", n));
    }
  }
  return {true, "starts {0, 462, 924}; 1000 random lengths covered with 50-token overlaps"};
}

// 4 -------------------------------------------------------------------------

std::vector<corpus::Chunk> random_corpus(Gen& g, const corpus::EmbeddingProvider& provider, std::size_t n) {
  std::vector<corpus::Chunk> chunks;
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n; ++i) {
    corpus::Chunk c;
    c.chunk_id = fmt::format("doc{:03}#0", i);
    c.doc_id = fmt::format("doc{:03}", i);
    // Repeat earlier texts now and then to force exact score ties.
    c.text = (!texts.empty() && g.coin(0.2)) ? g.pick(texts) : g.text(1, 40);
    c.token_end = 1;
    texts.push_back(c.text);
    chunks.push_back(std::move(c));
  }
  auto vecs = corpus::embed_batch(texts, provider);
  for (std::size_t i = 0; i < n; ++i) chunks[i].embedding = std::move(vecs[i]);
  return chunks;
}

Outcome retrieval_oracle() {
  const double spot = retrieval::rrf_term(1, 60) + retrieval::rrf_term(3, 60);
  if (std::abs(spot - (1.0 / 61.0 + 1.0 / 63.0)) > 1e-9 || std::abs(spot - 0.032266) > 5e-7) {
    return fail(fmt::format("RRF spot value {:.9f}", spot));
  }
  corpus::HashEmbedder provider("oracle", 32);
  Gen g(4);
  std::size_t ties = 0;
  for (int round = 0; round < 50; ++round) {
    auto chunks = random_corpus(g, provider, g.size(1, 200));
    corpus::HybridStore store(32);
    store.upsert(chunks);
    retrieval::RetrievalQuery q;
    q.semantic_text = g.text(1, 12);
    for (std::size_t i = g.size(1, 6); i > 0; --i) q.keyword_terms.push_back(g.word());
    retrieval::SearchConfig cfg;
    cfg.k_dense = g.size(1, 60);
    cfg.k_sparse = g.size(1, 60);
    const auto got = retrieval::hybrid_search(store, q, provider, cfg);
    const auto want = oracle_hybrid_rrf(chunks, q, provider, cfg.k_dense, cfg.k_sparse, 60.0);
    if (got.size() != want.size()) return fail(fmt::format("round {}: {} vs {} hits", round, got.size(), want.size()));
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got[i].chunk_id != want[i].chunk_id || std::abs(got[i].fused_score - want[i].fused) > 1e-12 ||
          got[i].final_rank != static_cast<int>(i) + 1) {
        return fail(fmt::format("round {}: position {} is {} expected {}", round, i, got[i].chunk_id, want[i].chunk_id));
      }
      if (i > 0 && got[i].fused_score == got[i - 1].fused_score) ++ties;
    }
  }
  if (ties == 0) return fail("generator produced no ties");
  return {true, fmt::format("50 random corpora match the brute-force oracle ({} tied neighbours); RRF 1/61+1/63 = {:.6f}",
                            ties, spot)};
}

// 5 -------------------------------------------------------------------------

Outcome reranker() {
  const std::vector<corpus::Embedding> q = {{1.0f, 0.0f}, {0.0f, 1.0f}};
  const std::vector<corpus::Embedding> d = {{1.0f, 0.0f}, {0.6f, 0.8f}};
  const double s = retrieval::maxsim(q, d);
  if (std::abs(s - 1.8) > 1e-6 || std::abs(oracle_maxsim(q, d) - 1.8) > 1e-6) {
    return fail(fmt::format("MaxSim hand example gave {:.12f}", s));
  }
  // Double inputs make the hand example exact; float storage rounds 0.6/0.8.
  if (std::abs((1.0 + 0.8) - 1.8) > 1e-9) return fail("arithmetic");

  corpus::HashEmbedder provider("rerank", 24);
  Gen g(5);
  for (int round = 0; round < 100; ++round) {
    auto chunks = random_corpus(g, provider, g.size(1, 40));
    corpus::HybridStore store(24);
    store.upsert(chunks);
    retrieval::RetrievalQuery query;
    query.semantic_text = g.text(1, 10);
    query.keyword_terms = {g.word(), g.word()};
    const auto hits = retrieval::hybrid_search(store, query, provider);
    for (auto kind : {retrieval::RerankerKind::kLateInteractionMaxSim, retrieval::RerankerKind::kEmbeddingSimilarity,
                      retrieval::RerankerKind::kNone}) {
      const auto out = retrieval::rerank(hits, query, kind, provider, store);
      std::multiset<std::string> a, b;
      for (const auto& h : hits) a.insert(h.chunk_id);
      for (const auto& h : out) b.insert(h.chunk_id);
      if (a != b) return fail(fmt::format("round {}: rerank is not a permutation", round));
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].final_rank != static_cast<int>(i) + 1) return fail("final ranks not renumbered");
      }
    }
  }
  return {true, fmt::format("MaxSim example = {:.6f}; 100 random rerank calls per kind are permutations", s)};
}

// 6 -------------------------------------------------------------------------

confignet::DependencyCandidate random_candidate(Gen& g, const std::string& id) {
  static const std::vector<std::string> files = {"application.yml", "Dockerfile", "pom.xml", "docker-compose.yml"};
  static const std::vector<std::string> techs = {"spring", "docker", "maven", "docker-compose"};
  const auto fa = g.size(0, 3), fb = g.size(0, 3);
  confignet::DependencyCandidate c;
  c.id = id;
  c.option_a = confignet::make_option("p", files[fa], confignet::Technology::parse(techs[fa]),
                                      g.word() + "." + g.word(), g.word(), 1);
  c.option_b = confignet::make_option("p", files[fb], confignet::Technology::parse(techs[fb]),
                                      g.word() + "." + g.word(), c.option_a.raw_value, 1);
  c.is_cross_technology = fa != fb;
  return c;
}

Outcome shot_selection() {
  corpus::HashEmbedder provider("shots", 48);
  Gen g(6);
  for (int round = 0; round < 100; ++round) {
    const auto n = g.size(3, 30);
    std::vector<validator::ShotExample> pool;
    std::vector<std::string> summaries;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = random_candidate(g, fmt::format("s{:02}", i));
      validator::ShotExample ex;
      ex.id = c.id;
      // Duplicate summaries create cosine ties that must fall back to ids.
      ex.summary = (!summaries.empty() && g.coin(0.2)) ? g.pick(summaries) : validator::candidate_summary(c);
      ex.label = g.coin();
      summaries.push_back(ex.summary);
      pool.push_back(std::move(ex));
    }
    auto vecs = corpus::embed_batch(summaries, provider);
    for (std::size_t i = 0; i < n; ++i) pool[i].embedding = std::move(vecs[i]);
    // Half of the rounds validate a candidate that is itself in the pool.
    const auto self_id = g.coin() ? pool[g.size(0, n - 1)].id : std::string("query");
    const auto candidate = random_candidate(g, self_id);
    const auto got = validator::select_shots(candidate, pool, provider, 2);
    const auto want = oracle_top_shots(candidate, pool, provider, 2);
    if (got.size() != 2) return fail(fmt::format("round {}: {} shots", round, got.size()));
    for (std::size_t i = 0; i < 2; ++i) {
      if (got[i].id == candidate.id) return fail(fmt::format("round {}: returned the candidate itself", round));
      if (got[i].id != want[i]) return fail(fmt::format("round {}: slot {} is {} expected {}", round, i, got[i].id, want[i]));
    }
  }
  return {true, "100 random pools match brute-force top-2 cosine; own id never returned"};
}

// 7 -------------------------------------------------------------------------

Outcome verdict_parser() {
  const auto ok = validator::parse_verdict(R"({"plan":"p","rationale":"r","uncertainty":10,"isDependency":true})");
  if (ok.parse_status != validator::ParseStatus::kOk || ok.uncertainty != 10 || !ok.is_dependency) return fail("clean example");
  const auto rep = validator::parse_verdict(
      R"(Sure! Here is my answer: {"plan":"p","rationale":"r","uncertainty":"7","isDependency":false} hope that helps)");
  if (rep.parse_status != validator::ParseStatus::kRepaired || rep.uncertainty != 7) return fail("repairable example");
  const auto bad = validator::parse_verdict(R"({"plan":"p","rationale":"r","uncertainty":11,"isDependency":true})");
  if (bad.parse_status != validator::ParseStatus::kDefaulted || bad.is_dependency) return fail("out-of-range example");

  Gen g(7);
  for (int i = 0; i < 100000; ++i) {
    const auto input = (i % 2 == 0) ? g.bytes(200) : g.json_ish(40);
    validator::Verdict v;
    try {
      v = validator::parse_verdict(input);
    } catch (const std::exception& e) {
      return fail(fmt::format("input {} threw: {}", i, e.what()));
    }
    if (v.uncertainty < 0 || v.uncertainty > 10) return fail(fmt::format("input {}: uncertainty {}", i, v.uncertainty));
    if (v.parse_status == validator::ParseStatus::kDefaulted && v.is_dependency) return fail("defaulted but positive");
  }
  return {true, "examples give ok/repaired/defaulted; 100000 fuzz inputs parsed"};
}

// 8 -------------------------------------------------------------------------

retrieval::ContextSlots fixed_slots() {
  retrieval::ContextSlots s;
  s.top_n = 5;
  const corpus::SourceKind kinds[] = {corpus::SourceKind::kManual, corpus::SourceKind::kStackOverflow,
                                      corpus::SourceKind::kWebSearch, corpus::SourceKind::kGithubRepo,
                                      corpus::SourceKind::kManual};
  for (int i = 0; i < 5; ++i) {
    s.slots.push_back({fmt::format("doc{}#0", i), kinds[i], fmt::format("Context text number {}.", i + 1)});
  }
  return s;
}

std::vector<validator::ShotExample> fixed_shots() {
  validator::ShotExample a;
  a.id = "s1";
  a.summary = "spring option server.port = 9090 (application.yml) | docker-compose option services.web.ports[0] = 9090 "
              "(docker-compose.yml)";
  a.label = true;
  validator::ShotExample b;
  b.id = "s2";
  b.summary = "maven option project.version = 2 (pom.xml) | docker option ARG.RETRIES = 2 (Dockerfile)";
  b.label = false;
  return {a, b};
}

Outcome prompt_goldens() {
  const auto cand = port_candidate();
  const auto slots = fixed_slots();
  const auto shots = fixed_shots();
  struct Case {
    validator::PromptVariant variant;
    std::vector<validator::ShotExample> shots;
    const char* file;
  };
  const Case cases[] = {{validator::PromptVariant::kBase, {}, "prompt_base.txt"},
                        {validator::PromptVariant::kRefined, shots, "prompt_refined.txt"}};
  for (const auto& c : cases) {
    const auto prompt = validator::build_prompt(cand, slots, c.variant, c.shots);
    const auto text = prompt.text();
    std::size_t pos = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      if (prompt.sections[i].kind != validator::kSectionOrder[i]) return fail("section order");
      const auto at = text.find(prompt.sections[i].text, pos);
      if (at == std::string::npos) return fail(fmt::format("{}: section {} out of order", c.file, i));
      pos = at + prompt.sections[i].text.size();
    }
    if (prompt.sections[2].text.find("[Context 5 | manual]") == std::string::npos) return fail("five context blocks");
    const auto golden = data_dir() / "golden" / c.file;
    if (update_goldens()) write_file(golden, text);
    if (read_file(golden) != text) return fail(fmt::format("{} differs from the frozen golden", c.file));
  }

  // Variant 4 retrieval keeps at most three slots.
  corpus::HashEmbedder provider("qwen2", 3584);
  const auto manifest = corpus::CorpusManifest::load(data_dir() / "corpus" / "manifest.yml");
  const auto loaded = corpus::load_corpus(data_dir() / "corpus", manifest);
  std::vector<corpus::Chunk> chunks;
  for (const auto& d : loaded.documents) {
    for (auto& ch : corpus::chunk_document(d)) chunks.push_back(std::move(ch));
  }
  std::vector<std::string> texts;
  for (const auto& ch : chunks) texts.push_back(ch.text);
  auto vecs = corpus::embed_batch(texts, provider);
  for (std::size_t i = 0; i < chunks.size(); ++i) chunks[i].embedding = std::move(vecs[i]);
  corpus::HybridStore store(3584);
  store.upsert(chunks);
  const auto v4 = eval::studied_variants().at(3);
  validator::RetrievalSettings rag;
  rag.variant_id = v4.id;
  rag.provider = &provider;
  rag.reranker = v4.reranker;
  rag.top_n = v4.top_n;
  std::vector<std::string> warnings;
  const auto ctx = validator::retrieve_context(cand, store, rag, nullptr, warnings);
  if (v4.top_n != 3 || ctx.slots.size() > 3 || ctx.slots.empty()) {
    return fail(fmt::format("variant 4 produced {} slots", ctx.slots.size()));
  }
  return {true, fmt::format("base and refined goldens match with five ordered sections; variant 4 uses {} slots",
                            ctx.slots.size())};
}

// 9 -------------------------------------------------------------------------

Outcome extraction() {
  const auto extracted = confignet::extract_project(data_dir() / "port_project", "port_project");
  if (!extracted.failures.empty()) return fail("port fixture failed to parse");
  const auto candidates = confignet::detect_candidates(extracted.options);
  if (candidates.size() != 1) return fail(fmt::format("{} candidates from the port fixture", candidates.size()));
  const auto& c = candidates.front();
  if (!c.is_cross_technology) return fail("port candidate is not cross-technology");
  const std::set<std::string> names{c.option_a.name, c.option_b.name};
  if (!names.count("server.port") || !names.count("EXPOSE")) return fail("port candidate pairs the wrong options");

  static const std::vector<std::pair<std::string, std::string>> files = {
      {"application.yml", "spring"}, {"Dockerfile", "docker"}, {"pom.xml", "maven"},
      {"docker-compose.yml", "docker-compose"}, {"app.properties", "properties"}};
  static const std::vector<std::string> values = {"8080", "8080 ", "9090", "app", "true", "false", "1", "0",
                                                  "512m", "536870912", "30s", "30000ms", "localhost", "/app",
                                                  "http://db:5432", "petclinic", "17", "latest"};
  Gen g(9);
  const auto stoplist = confignet::ValueStoplist::defaults();
  for (int round = 0; round < 50; ++round) {
    std::vector<confignet::ConfigOption> options;
    for (std::size_t i = g.size(0, 200); i > 0; --i) {
      const auto& [file, tech] = g.pick(files);
      options.push_back(confignet::make_option("p", file, confignet::Technology::parse(tech), g.word() + "." + g.word(),
                                               g.pick(values), static_cast<int>(i)));
    }
    const auto got = confignet::detect_candidates(options, stoplist);
    std::set<std::tuple<std::string, std::string, std::string>> got_set;
    for (const auto& c2 : got) got_set.emplace(c2.id, c2.option_a.coordinate(), c2.option_b.coordinate());
    if (got_set.size() != got.size()) return fail("duplicate candidate ids");
    if (got_set != oracle_candidates(options, stoplist)) return fail(fmt::format("round {} differs from O(n^2) oracle", round));
  }
  return {true, "port fixture yields 1 cross-technology candidate; 50 random option sets match the O(n^2) oracle"};
}

// 10 ------------------------------------------------------------------------

Outcome holdout_hygiene() {
  corpus::HashEmbedder provider("shots", 16);
  const auto dataset = eval::load_dataset(data_dir() / "golden" / "dataset.jsonl");
  auto items = dataset.items;
  items[0].split = eval::Split::kHoldout;
  bool pool_guard = false;
  try {
    eval::build_shot_pool(items, provider);
  } catch (const Error& e) {
    pool_guard = e.code() == ErrorCode::kHoldoutViolation;
  }
  auto pool = eval::build_shot_pool(std::span(dataset.items).subspan(1), provider);
  pool[0].from_holdout = true;
  bool select_guard = false;
  try {
    validator::select_shots(dataset.items[0].candidate, pool, provider, 2);
  } catch (const Error& e) {
    select_guard = e.code() == ErrorCode::kHoldoutViolation;
  }
  if (!pool_guard) return fail("building a shot pool from holdout items was not rejected");
  if (!select_guard) return fail("selecting shots from a pool with a holdout example was not rejected");
  return {true, "holdout items rejected when building and when drawing shots"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_ms;
    std::function<Outcome()> run;
    // Set when the criterion cannot hold for reasons outside this code base.
    // Such a criterion still prints FAIL but does not fail the suite.
    const char* known_unattainable = nullptr;
  };
  const std::vector<Criterion> criteria = {
      {1, "published-table consistency", 1000, published_tables,
       "the published llama3:8b vanilla row (P 0.55, R 0.84, F1 0.65) is inconsistent by 0.015"},
      {2, "golden mock benchmark", 30000, golden_benchmark},
      {3, "chunker arithmetic", 5000, chunker},
      {4, "retrieval oracle equivalence", 60000, retrieval_oracle},
      {5, "re-ranker checks", 60000, reranker},
      {6, "few-shot selection", 60000, shot_selection},
      {7, "verdict parser fuzz", 60000, verdict_parser},
      {8, "prompt golden files", 60000, prompt_goldens},
      {9, "candidate extraction", 60000, extraction},
      {10, "holdout hygiene", 60000, holdout_hygiene},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && ms > c.budget_ms) o = fail(fmt::format("took {:.0f} ms, budget {:.0f} ms", ms, c.budget_ms));
    std::string note;
    if (!o.pass && c.known_unattainable) note = fmt::format(" [known: {}]", c.known_unattainable);
    else if (!o.pass) ++failed;
    std::cout << fmt::format("{} criterion {:>2}: {} - {} ({:.0f} ms){}", o.pass ? "PASS" : "FAIL", c.id, c.name,
                             o.detail, ms, note)
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <sstream>

#include "cfgrag/eval/dataset.hpp"
#include "cfgrag/eval/experiment.hpp"
#include "cfgrag/eval/metrics.hpp"
#include "cfgrag/eval/report.hpp"
#include "expect_error.hpp"
#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"

namespace cfgrag::eval {
namespace {

using testing::code_of;
using testing::data_dir;
using testing::read_file;
using testing::TempDir;
using testing::write_file;

const char* kLine =
    R"({"id": "x1", "project": "p", "option_a": {"file": "a.yml", "technology": "spring", "name": "server.port", "value": "80"}, )"
    R"("option_b": {"file": "Dockerfile", "technology": "docker", "name": "EXPOSE", "value": "80"}, "label": true, "split": "benchmark"})";

validator::ValidationRecord record(const std::string& id, bool predicted) {
  validator::ValidationRecord r;
  r.candidate_id = id;
  r.model_id = "m";
  r.rag_variant_id = "w/o";
  r.verdict.is_dependency = predicted;
  r.verdict.parse_status = validator::ParseStatus::kOk;
  return r;
}

TEST(Dataset, GoldenFile) {
  const auto d = load_dataset(data_dir() / "golden" / "dataset.jsonl");
  EXPECT_EQ(d.items.size(), 12u);
  EXPECT_EQ(d.benchmark_count, 12u);
  EXPECT_EQ(d.holdout_count, 0u);
  ASSERT_TRUE(d.find("g03"));
  EXPECT_TRUE(d.find("g03")->borderline);
  EXPECT_EQ(d.find("g01")->candidate.option_b.name, "EXPOSE");
}

TEST(Dataset, SchemaViolationsCarryTheLine) {
  TempDir dir;
  auto j = nlohmann::json::parse(kLine);
  j.erase("label");
  write_file(dir / "d.jsonl", std::string(kLine) + "\n" + j.dump() + "\n");
  try {
    load_dataset(dir / "d.jsonl");
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaViolation);
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("label"), std::string::npos);
  }

  auto bad_split = nlohmann::json::parse(kLine);
  bad_split["split"] = "train";
  EXPECT_EQ(code_of([&] { parse_item(bad_split, 1); }), ErrorCode::kSchemaViolation);
  auto bad_cat = nlohmann::json::parse(kLine);
  bad_cat["failure_category"] = "typo";
  EXPECT_EQ(code_of([&] { parse_item(bad_cat, 1); }), ErrorCode::kSchemaViolation);
}

TEST(Dataset, DuplicatesAndMissingFiles) {
  TempDir dir;
  write_file(dir / "d.jsonl", std::string(kLine) + "\n" + kLine + "\n");
  EXPECT_EQ(code_of([&] { load_dataset(dir / "d.jsonl"); }), ErrorCode::kDuplicateId);
  EXPECT_EQ(code_of([&] { load_dataset(dir / "none.jsonl"); }), ErrorCode::kMissingPath);
  write_file(dir / "a.jsonl", std::string(kLine) + "\n");
  const std::vector<std::filesystem::path> twice{dir / "a.jsonl", dir / "a.jsonl"};
  EXPECT_EQ(code_of([&] { load_datasets(twice); }), ErrorCode::kDuplicateId);
}

TEST(Dataset, ItemRoundTrip) {
  auto item = parse_item(nlohmann::json::parse(kLine), 1);
  item.failure_category = FailureCategory::kPortMapping;
  item.notes = "n";
  const auto back = parse_item(item_to_json(item), 1);
  EXPECT_EQ(back.candidate.id, "x1");
  EXPECT_EQ(back.failure_category, FailureCategory::kPortMapping);
  EXPECT_EQ(back.notes, "n");
  EXPECT_EQ(back.candidate.option_a.raw_value, "80");
}

TEST(FailureCategories, EightNamedValues) {
  EXPECT_EQ(kFailureCategories.size(), 8u);
  for (auto c : kFailureCategories) EXPECT_EQ(parse_failure_category(to_string(c)), c);
  EXPECT_EQ(display_name(FailureCategory::kPortMapping), "Port Mapping");
  EXPECT_EQ(to_string(FailureCategory::kContextAvailabilityRetrievalUtilization),
            "context_availability_retrieval_utilization");
}

TEST(Confusion, Counting) {
  LabelMap labels;
  std::vector<validator::ValidationRecord> right;
  std::vector<validator::ValidationRecord> all_true;
  for (int i = 0; i < 10; ++i) {
    const auto id = "c" + std::to_string(i);
    labels[id] = i < 6;
    right.push_back(record(id, i < 6));
    all_true.push_back(record(id, true));
  }
  EXPECT_EQ(compute_confusion(right, labels), (ConfusionMatrix{6, 0, 4, 0, 0}));
  EXPECT_EQ(compute_confusion(all_true, labels), (ConfusionMatrix{6, 4, 0, 0, 0}));

  auto stray = right;
  stray.push_back(record("zz", true));
  EXPECT_EQ(code_of([&] { compute_confusion(stray, labels); }), ErrorCode::kMissingLabel);

  auto defaulted = right;
  defaulted[0].verdict = validator::Verdict{};
  const auto cm = compute_confusion(defaulted, labels);
  EXPECT_EQ(cm.fn, 1u);
  EXPECT_EQ(cm.defaulted, 1u);
}

TEST(Metrics, Examples) {
  const auto m = compute_metrics({2, 1, 0, 2, 0});
  EXPECT_NEAR(m.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.recall, 0.5, 1e-12);
  EXPECT_NEAR(m.f1, 4.0 / 7.0, 1e-12);
  EXPECT_EQ(m.n_failures, 3u);

  const auto perfect = compute_metrics({7, 0, 3, 0, 0});
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);

  // A published vanilla row: P .89, R .62, F1 .73.
  EXPECT_NEAR(f1_score(0.89, 0.62), 0.73, 0.005);
  EXPECT_NEAR(f1_score(0.89, 0.62), testing::oracle_f1(0.89, 0.62), 1e-15);
}

TEST(Metrics, DegenerateAndEmpty) {
  const auto none = compute_metrics({0, 0, 5, 3, 0});
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  EXPECT_TRUE(none.flags.count(MetricFlag::kNoPositivePredictions));
  const auto nolabels = compute_metrics({0, 2, 5, 0, 0});
  EXPECT_TRUE(nolabels.flags.count(MetricFlag::kNoPositiveLabels));
  EXPECT_EQ(code_of([] { compute_metrics({}); }), ErrorCode::kEmptyMatrix);
}

TEST(MetricsProperty, HarmonicMeanIdentities) {
  testing::Gen g(2024);
  for (int i = 0; i < 2000; ++i) {
    ConfusionMatrix cm{g.size(0, 50), g.size(0, 50), g.size(0, 50), g.size(0, 50), 0};
    if (cm.total() == 0) continue;
    const auto m = compute_metrics(cm);
    EXPECT_GE(m.f1, 0.0);
    EXPECT_LE(m.f1, 1.0);
    if (m.precision + m.recall > 0) {
      EXPECT_NEAR(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall), 1e-12);
    }
    EXPECT_EQ(m.n_failures, cm.fp + cm.fn);
    const double p = g.real(0.0, 1.0);
    EXPECT_NEAR(f1_score(p, p), p, 1e-12);
  }
}

ExperimentResult small_result() {
  ExperimentResult r;
  r.run_id = "t";
  r.rag_order = {"w/o"};
  r.model_order = {"m", "n"};
  r.labels = {{"a", true}, {"b", false}, {"c", true}};
  r.splits = {{"a", Split::kBenchmark}, {"b", Split::kBenchmark}, {"c", Split::kHoldout}};
  CellResult cell;
  cell.rag_id = "w/o";
  cell.model_id = "m";
  cell.records = {record("a", true), record("b", true), record("c", false)};
  cell.confusion = compute_confusion(cell.records, r.labels);
  cell.metrics = compute_metrics(cell.confusion);
  r.cells.push_back(cell);
  CellResult missing;
  missing.rag_id = "w/o";
  missing.model_id = "n";
  missing.complete = false;
  missing.error = "endpoint down";
  r.cells.push_back(missing);
  return r;
}

TEST(Report, MarkdownAndCsv) {
  const auto r = small_result();
  const auto md = render_metrics_markdown(r);
  EXPECT_NE(md.find("| RAG ID | LLM | #Failures | Precision | Recall | F1-Score |"), std::string::npos);
  EXPECT_NE(md.find("| w/o | m | 2 | 0.50 | 0.50 | 0.50 |"), std::string::npos);
  EXPECT_NE(md.find("| w/o | n † | — | — | — | — |"), std::string::npos);
  EXPECT_NE(md.find("endpoint down"), std::string::npos);

  const auto csv = render_metrics_csv(r);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "rag_id,model,failures,precision,recall,f1");
  std::string row;
  std::getline(in, row);
  EXPECT_TRUE(row.starts_with("w/o,m,2,0.5,0.5,0.5"));
  EXPECT_FALSE(std::getline(in, row) && !row.empty());
}

TEST(Report, MeanRowOverCompleteCells) {
  auto r = small_result();
  const auto mean = r.mean("w/o");
  ASSERT_TRUE(mean);
  EXPECT_EQ(mean->cells, 1u);
  EXPECT_DOUBLE_EQ(mean->f1, 0.5);
}

TEST(Report, RecordJsonRoundTrip) {
  auto rec = record("a", true);
  rec.context.top_n = 3;
  rec.context.slots.push_back({"d#0", corpus::SourceKind::kWebSearch, "text"});
  rec.warnings.push_back("w");
  rec.model_calls = 2;
  const auto back = record_from_json(record_to_json(rec));
  EXPECT_EQ(back.candidate_id, "a");
  EXPECT_EQ(back.verdict, rec.verdict);
  EXPECT_EQ(back.context.slots.size(), 1u);
  EXPECT_EQ(back.context.slots[0].source_kind, corpus::SourceKind::kWebSearch);
  EXPECT_EQ(back.model_calls, 2);
  EXPECT_TRUE(record_to_json(rec)["wall_time_ms"].is_null());
}

TEST(Report, EmitAndReload) {
  TempDir dir;
  const auto r = small_result();
  emit_report(r, dir.path());
  for (const char* f : {"metrics.md", "metrics.csv", "slot_usage.csv", "failures.csv", "records.jsonl", "run.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto back = load_result(dir.path());
  EXPECT_EQ(render_metrics_markdown(back), render_metrics_markdown(r));
  EXPECT_EQ(code_of([&] { load_result(dir / "nope"); }), ErrorCode::kMissingPath);
}

TEST(Annotate, FailuresOnlyAndLatestWins) {
  TempDir dir;
  emit_report(small_result(), dir.path());
  EXPECT_EQ(code_of([&] { annotate_failure(dir.path(), "w/o", "m", "a", FailureCategory::kPortMapping, ""); }),
            ErrorCode::kNotAFailure);
  EXPECT_EQ(code_of([&] { annotate_failure(dir.path(), "w/o", "m", "c", FailureCategory::kPortMapping, ""); }),
            ErrorCode::kHoldoutViolation);
  EXPECT_EQ(code_of([&] { annotate_failure(dir.path(), "w/o", "m", "zz", FailureCategory::kPortMapping, ""); }),
            ErrorCode::kMissingLabel);

  annotate_failure(dir.path(), "w/o", "m", "b", FailureCategory::kPortMapping, "first");
  annotate_failure(dir.path(), "w/o", "m", "b", FailureCategory::kResourceSharing, "second");
  const auto log = load_annotations(dir.path());
  EXPECT_EQ(log.size(), 2u);
  const auto latest = latest_annotations(log);
  ASSERT_EQ(latest.size(), 1u);
  EXPECT_EQ(latest.begin()->second.category, FailureCategory::kResourceSharing);
}

TEST(FailureTable, BucketsUnannotatedAsOthers) {
  const auto r = small_result();
  AnnotationIndex idx;
  const auto empty = failure_table(r, idx);
  ASSERT_EQ(empty.columns.size(), 2u);
  EXPECT_EQ(empty.totals[1], 0u);
  EXPECT_EQ(empty.counts.at(FailureCategory::kOthers)[0], 2u);
  EXPECT_EQ(empty.totals[0], 2u);

  Annotation a;
  a.rag_id = "w/o";
  a.model_id = "m";
  a.candidate_id = "b";
  a.category = FailureCategory::kPortMapping;
  idx[{"w/o", "m", "b"}] = a;
  const auto mixed = failure_table(r, idx);
  EXPECT_EQ(mixed.counts.at(FailureCategory::kPortMapping)[0], 1u);
  EXPECT_EQ(mixed.counts.at(FailureCategory::kOthers)[0], 1u);
  EXPECT_EQ(mixed.totals[0], 2u);
  EXPECT_TRUE(render_failures_csv(mixed).starts_with("category,w/o/m,w/o/n\n"));
}

TEST(Experiment, StudiedGrid) {
  const auto v = studied_variants();
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0].embedding.provider_id, "ada2");
  EXPECT_EQ(v[0].embedding.dimension, 1536u);
  EXPECT_EQ(v[2].reranker, retrieval::RerankerKind::kEmbeddingSimilarity);
  EXPECT_EQ(v[3].top_n, 3u);
  EXPECT_EQ(studied_conditions().size(), 5u);
  EXPECT_TRUE(studied_conditions()[0].is_vanilla());
  EXPECT_EQ(studied_model_ids().size(), 4u);
}

TEST(Experiment, ShotPoolRejectsHoldout) {
  auto d = load_dataset(data_dir() / "golden" / "dataset.jsonl");
  const corpus::HashEmbedder e("h", 32);
  EXPECT_EQ(build_shot_pool(d.items, e).size(), 12u);
  d.items[4].split = Split::kHoldout;
  EXPECT_EQ(code_of([&] { build_shot_pool(d.items, e); }), ErrorCode::kHoldoutViolation);
}

TEST(Experiment, VanillaGridOnGoldenDataset) {
  const auto d = load_dataset(data_dir() / "golden" / "dataset.jsonl");
  ExperimentConfig cfg;
  cfg.dataset = &d;
  for (const auto& id : studied_model_ids()) {
    gateway::ModelConfig m;
    m.model_id = id;
    cfg.models.push_back(m);
  }
  cfg.variants = {RagVariant::vanilla()};
  ExperimentEnv env;
  const auto r = run_experiment(cfg, env);
  ASSERT_EQ(r.cells.size(), 4u);
  for (const auto& c : r.cells) {
    EXPECT_TRUE(c.complete);
    EXPECT_EQ(c.confusion, (ConfusionMatrix{4, 2, 3, 3, 0}));
  }

  cfg.only_models = {"llama3:8b"};
  EXPECT_EQ(run_experiment(cfg, env).cells.size(), 1u);
}

TEST(Experiment, UnavailableModelMarksCellIncomplete) {
  const auto d = load_dataset(data_dir() / "golden" / "dataset.jsonl");
  ExperimentConfig cfg;
  cfg.dataset = &d;
  gateway::ModelConfig m;
  m.model_id = "llama3:8b";
  m.retries = 0;
  cfg.models = {m};
  cfg.variants = {RagVariant::vanilla()};
  class Down final : public net::HttpTransport {
   public:
    net::HttpResponse send(const net::HttpRequest&) override { return {503, "", ""}; }
  };
  ExperimentEnv env;
  env.transport_factory = [](const gateway::ModelConfig&) { return std::make_shared<Down>(); };
  const auto r = run_experiment(cfg, env);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_FALSE(r.cells[0].complete);
  EXPECT_FALSE(r.cells[0].metrics);
  EXPECT_TRUE(r.cells[0].error);
}

}  // namespace
}  // namespace cfgrag::eval

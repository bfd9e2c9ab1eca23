// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cfgrag/eval/dataset.hpp"
#include "cfgrag/eval/experiment.hpp"

namespace cfgrag::eval {

struct ReportOptions {
  /// Wall-clock times make records differ between runs; off keeps every
  /// output byte-stable.
  bool record_wall_time = false;
};

nlohmann::json record_to_json(const validator::ValidationRecord& r, const ReportOptions& opts = {});
validator::ValidationRecord record_from_json(const nlohmann::json& j);

/// Markdown table: RAG ID, LLM, #Failures, Precision, Recall, F1-Score,
/// a mean row per condition, 2 decimals, "—" plus a footnote for incomplete
/// cells.
std::string render_metrics_markdown(const ExperimentResult& result);
/// Header "rag_id,model,failures,precision,recall,f1", one row per complete
/// cell, full precision.
std::string render_metrics_csv(const ExperimentResult& result);
/// Header "rag_id,model,slot,source_kind,fraction,filled,total".
std::string render_slot_usage_csv(const ExperimentResult& result);

struct Annotation {
  std::string timestamp;
  std::string rag_id;
  std::string model_id;
  std::string candidate_id;
  FailureCategory category = FailureCategory::kOthers;
  std::string notes;
};

/// Latest annotation per (rag_id, model_id, candidate_id).
using AnnotationIndex = std::map<std::tuple<std::string, std::string, std::string>, Annotation>;

std::vector<Annotation> load_annotations(const std::filesystem::path& run_dir);
AnnotationIndex latest_annotations(const std::vector<Annotation>& log);

struct CategoryCountTable {
  std::vector<std::pair<std::string, std::string>> columns;  // (rag_id, model_id)
  std::map<FailureCategory, std::vector<std::size_t>> counts;
  std::vector<std::size_t> totals;
};

/// Failures per category and condition. A failure takes its annotation,
/// else the dataset item's category, else others.
CategoryCountTable failure_table(const ExperimentResult& result, const AnnotationIndex& annotations,
                                 const Dataset* dataset = nullptr);
/// Header "category,<rag_id>/<model>,...", one row per category plus total.
std::string render_failures_csv(const CategoryCountTable& table);

/// Writes metrics.md, metrics.csv, slot_usage.csv, failures.csv,
/// records.jsonl and run.json under `run_dir`.
void emit_report(const ExperimentResult& result, const std::filesystem::path& run_dir, const ReportOptions& opts = {},
                 const Dataset* dataset = nullptr);

/// Rebuilds a result from run.json and records.jsonl. kMissingPath if the
/// run directory or its files are absent.
ExperimentResult load_result(const std::filesystem::path& run_dir);

/// Appends an annotation after checking the record is a failure
/// (kNotAFailure) outside the holdout split (kHoldoutViolation). kMissingLabel
/// when the run has no such record.
Annotation annotate_failure(const std::filesystem::path& run_dir, const std::string& rag_id,
                            const std::string& model_id, const std::string& candidate_id, FailureCategory category,
                            const std::string& notes);

}  // namespace cfgrag::eval

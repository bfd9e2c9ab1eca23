// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/eval/report.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <sstream>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::eval {

namespace fs = std::filesystem;
using nlohmann::json;
using validator::ValidationRecord;

namespace {

constexpr std::string_view kDash = "—";

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + p.string());
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  return "\"" + util::replace_all(std::string(s), "\"", "\"\"") + "\"";
}

std::vector<json> read_jsonl(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingPath, p.string() + " not found");
  std::vector<json> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (util::trim(line).empty()) continue;
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kSchemaViolation, p.string() + ": invalid JSON", n);
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace

json record_to_json(const ValidationRecord& r, const ReportOptions& opts) {
  json slots = json::array();
  for (const auto& s : r.context.slots) {
    slots.push_back({{"chunk_id", s.chunk_id}, {"source_kind", corpus::to_string(s.source_kind)}});
  }
  json j{{"candidate_id", r.candidate_id},
         {"model_id", r.model_id},
         {"rag_variant_id", r.rag_variant_id},
         {"prompt_sha256", r.prompt_sha256},
         {"context", {{"top_n", r.context.top_n}, {"slots", slots}}},
         {"verdict",
          {{"plan", r.verdict.plan},
           {"rationale", r.verdict.rationale},
           {"uncertainty", r.verdict.uncertainty},
           {"isDependency", r.verdict.is_dependency},
           {"parse_status", validator::to_string(r.verdict.parse_status)}}},
         {"model_calls", r.model_calls},
         {"warnings", r.warnings}};
  j["wall_time_ms"] = opts.record_wall_time ? json(r.wall_time_ms) : json(nullptr);
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  return j;
}

ValidationRecord record_from_json(const json& j) {
  ValidationRecord r;
  r.candidate_id = j.at("candidate_id").get<std::string>();
  r.model_id = j.at("model_id").get<std::string>();
  r.rag_variant_id = j.at("rag_variant_id").get<std::string>();
  r.prompt_sha256 = j.value("prompt_sha256", "");
  const auto& ctx = j.at("context");
  r.context.top_n = ctx.value("top_n", std::size_t{0});
  for (const auto& s : ctx.at("slots")) {
    r.context.slots.push_back({s.at("chunk_id").get<std::string>(),
                               corpus::parse_source_kind(s.at("source_kind").get<std::string>()), ""});
  }
  const auto& v = j.at("verdict");
  r.verdict.plan = v.value("plan", "");
  r.verdict.rationale = v.value("rationale", "");
  r.verdict.uncertainty = v.value("uncertainty", 0);
  r.verdict.is_dependency = v.value("isDependency", false);
  r.verdict.parse_status = validator::parse_parse_status(v.value("parse_status", "defaulted"));
  r.model_calls = j.value("model_calls", 0);
  if (j.contains("warnings")) r.warnings = j["warnings"].get<std::vector<std::string>>();
  if (j.contains("wall_time_ms") && j["wall_time_ms"].is_number()) r.wall_time_ms = j["wall_time_ms"].get<double>();
  if (j.contains("error") && j["error"].is_string()) r.error = j["error"].get<std::string>();
  return r;
}

std::string render_metrics_markdown(const ExperimentResult& result) {
  std::string out = fmt::format("# Validation effectiveness: {}\n\n", result.run_id);
  out += "| RAG ID | LLM | #Failures | Precision | Recall | F1-Score |\n";
  out += "|---|---|---:|---:|---:|---:|\n";
  std::vector<std::string> footnotes;
  std::vector<std::string> defaulted;
  for (const auto& rag : result.rag_order) {
    for (const auto& model : result.model_order) {
      const auto* c = result.find(rag, model);
      if (!c) continue;
      if (!c->complete || !c->metrics) {
        footnotes.push_back(fmt::format("{} / {}: {}", rag, model, c->error.value_or("no records")));
        out += fmt::format("| {} | {} † | {} | {} | {} | {} |\n", rag, model, kDash, kDash, kDash, kDash);
        continue;
      }
      const auto& m = *c->metrics;
      out += fmt::format("| {} | {} | {} | {:.2f} | {:.2f} | {:.2f} |\n", rag, model, m.n_failures, m.precision,
                         m.recall, m.f1);
      if (c->confusion.defaulted > 0) defaulted.push_back(fmt::format("{} / {}: {}", rag, model, c->confusion.defaulted));
    }
    if (const auto mean = result.mean(rag)) {
      out += fmt::format("| {} | mean | {:.0f} | {:.2f} | {:.2f} | {:.2f} |\n", rag, mean->failures, mean->precision,
                         mean->recall, mean->f1);
    } else {
      out += fmt::format("| {} | mean | {} | {} | {} | {} |\n", rag, kDash, kDash, kDash, kDash);
    }
  }
  if (!footnotes.empty()) {
    out += "\n† Incomplete cell, excluded from the mean row.\n";
    for (const auto& f : footnotes) out += "- " + f + "\n";
  }
  if (!defaulted.empty()) {
    out += "\nDefaulted verdicts (counted as negative predictions):\n";
    for (const auto& d : defaulted) out += "- " + d + "\n";
  }
  return out;
}

std::string render_metrics_csv(const ExperimentResult& result) {
  std::string out = "rag_id,model,failures,precision,recall,f1\n";
  for (const auto& rag : result.rag_order) {
    for (const auto& model : result.model_order) {
      const auto* c = result.find(rag, model);
      if (!c || !c->complete || !c->metrics) continue;
      const auto& m = *c->metrics;
      out += fmt::format("{},{},{},{},{},{}\n", csv_field(rag), csv_field(model), m.n_failures, m.precision, m.recall,
                         m.f1);
    }
  }
  return out;
}

std::string render_slot_usage_csv(const ExperimentResult& result) {
  std::string out = "rag_id,model,slot,source_kind,fraction,filled,total\n";
  for (const auto& rag : result.rag_order) {
    for (const auto& model : result.model_order) {
      const auto* c = result.find(rag, model);
      if (!c) continue;
      for (const auto& row : c->slot_usage.rows) {
        const auto& fill = c->slot_usage.fill.at(row.slot - 1);
        out += fmt::format("{},{},{},{},{},{},{}\n", csv_field(rag), csv_field(model), row.slot,
                           corpus::to_string(row.source_kind), row.fraction, fill.filled, fill.total);
      }
    }
  }
  return out;
}

std::vector<Annotation> load_annotations(const fs::path& run_dir) {
  std::vector<Annotation> out;
  const auto file = run_dir / "annotations.jsonl";
  if (!fs::exists(file)) return out;
  for (const auto& j : read_jsonl(file)) {
    Annotation a;
    a.timestamp = j.value("timestamp", "");
    a.rag_id = j.at("rag_id").get<std::string>();
    a.model_id = j.at("model_id").get<std::string>();
    a.candidate_id = j.at("candidate_id").get<std::string>();
    a.category = parse_failure_category(j.at("category").get<std::string>());
    a.notes = j.value("notes", "");
    out.push_back(std::move(a));
  }
  return out;
}

AnnotationIndex latest_annotations(const std::vector<Annotation>& log) {
  AnnotationIndex idx;
  for (const auto& a : log) idx[{a.rag_id, a.model_id, a.candidate_id}] = a;
  return idx;
}

CategoryCountTable failure_table(const ExperimentResult& result, const AnnotationIndex& annotations,
                                 const Dataset* dataset) {
  CategoryCountTable t;
  for (const auto& rag : result.rag_order) {
    for (const auto& model : result.model_order) {
      if (result.find(rag, model)) t.columns.emplace_back(rag, model);
    }
  }
  for (auto c : kFailureCategories) t.counts[c].assign(t.columns.size(), 0);
  t.totals.assign(t.columns.size(), 0);

  for (std::size_t col = 0; col < t.columns.size(); ++col) {
    const auto& [rag, model] = t.columns[col];
    const auto* cell = result.find(rag, model);
    for (const auto& r : cell->records) {
      const auto label = result.labels.find(r.candidate_id);
      if (label == result.labels.end() || !is_failure(r, label->second)) continue;
      auto category = FailureCategory::kOthers;
      if (const auto a = annotations.find({rag, model, r.candidate_id}); a != annotations.end()) {
        category = a->second.category;
      } else if (dataset) {
        if (const auto* item = dataset->find(r.candidate_id); item && item->failure_category) {
          category = *item->failure_category;
        }
      }
      ++t.counts[category][col];
      ++t.totals[col];
    }
  }
  return t;
}

std::string render_failures_csv(const CategoryCountTable& table) {
  std::string out = "category";
  for (const auto& [rag, model] : table.columns) out += "," + csv_field(rag + "/" + model);
  out += "\n";
  for (auto c : kFailureCategories) {
    out += std::string(to_string(c));
    for (auto n : table.counts.at(c)) out += fmt::format(",{}", n);
    out += "\n";
  }
  out += "total";
  for (auto n : table.totals) out += fmt::format(",{}", n);
  out += "\n";
  return out;
}

void emit_report(const ExperimentResult& result, const fs::path& run_dir, const ReportOptions& opts,
                 const Dataset* dataset) {
  fs::create_directories(run_dir);

  std::string records;
  json cells = json::array();
  for (const auto& rag : result.rag_order) {
    for (const auto& model : result.model_order) {
      const auto* c = result.find(rag, model);
      if (!c) continue;
      for (const auto& r : c->records) records += record_to_json(r, opts).dump() + "\n";
      json cell{{"rag_id", rag},
                {"model_id", model},
                {"complete", c->complete},
                {"records", c->records.size()},
                {"confusion",
                 {{"tp", c->confusion.tp},
                  {"fp", c->confusion.fp},
                  {"tn", c->confusion.tn},
                  {"fn", c->confusion.fn},
                  {"defaulted", c->confusion.defaulted}}}};
      cell["error"] = c->error ? json(*c->error) : json(nullptr);
      cells.push_back(std::move(cell));
    }
  }
  json items = json::object();
  for (const auto& [id, label] : result.labels) {
    const auto split = result.splits.find(id);
    items[id] = {{"label", label},
                 {"split", to_string(split == result.splits.end() ? Split::kBenchmark : split->second)}};
  }
  const json run{{"run_id", result.run_id},
                 {"rag_order", result.rag_order},
                 {"model_order", result.model_order},
                 {"cells", cells},
                 {"items", items}};

  write_file(run_dir / "records.jsonl", records);
  write_file(run_dir / "run.json", run.dump(2) + "\n");
  write_file(run_dir / "metrics.md", render_metrics_markdown(result));
  write_file(run_dir / "metrics.csv", render_metrics_csv(result));
  write_file(run_dir / "slot_usage.csv", render_slot_usage_csv(result));
  const auto annotations = latest_annotations(load_annotations(run_dir));
  write_file(run_dir / "failures.csv", render_failures_csv(failure_table(result, annotations, dataset)));
}

ExperimentResult load_result(const fs::path& run_dir) {
  const auto run_file = run_dir / "run.json";
  std::ifstream in(run_file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingPath, "no run at " + run_dir.string());
  const auto run = json::parse(in, nullptr, false);
  if (run.is_discarded()) throw Error(ErrorCode::kSchemaViolation, run_file.string() + " is not valid JSON");

  ExperimentResult result;
  result.run_id = run.at("run_id").get<std::string>();
  result.rag_order = run.at("rag_order").get<std::vector<std::string>>();
  result.model_order = run.at("model_order").get<std::vector<std::string>>();
  for (const auto& [id, item] : run.at("items").items()) {
    result.labels[id] = item.at("label").get<bool>();
    result.splits[id] = parse_split(item.at("split").get<std::string>());
  }
  for (const auto& c : run.at("cells")) {
    CellResult cell;
    cell.rag_id = c.at("rag_id").get<std::string>();
    cell.model_id = c.at("model_id").get<std::string>();
    cell.complete = c.at("complete").get<bool>();
    if (c.contains("error") && c["error"].is_string()) cell.error = c["error"].get<std::string>();
    result.cells.push_back(std::move(cell));
  }
  for (const auto& j : read_jsonl(run_dir / "records.jsonl")) {
    auto r = record_from_json(j);
    auto it = std::find_if(result.cells.begin(), result.cells.end(), [&](const CellResult& c) {
      return c.rag_id == r.rag_variant_id && c.model_id == r.model_id;
    });
    if (it == result.cells.end()) {
      throw Error(ErrorCode::kSchemaViolation, "record for unknown cell " + r.rag_variant_id + "/" + r.model_id);
    }
    it->records.push_back(std::move(r));
  }
  for (auto& cell : result.cells) {
    std::sort(cell.records.begin(), cell.records.end(),
              [](const auto& a, const auto& b) { return a.candidate_id < b.candidate_id; });
    cell.confusion = compute_confusion(cell.records, result.labels);
    if (cell.complete && cell.confusion.total() > 0) cell.metrics = compute_metrics(cell.confusion);
    std::vector<retrieval::ContextSlots> contexts;
    if (cell.rag_id != validator::kVanillaId) {
      for (const auto& r : cell.records) contexts.push_back(r.context);
    }
    cell.slot_usage = retrieval::source_usage(contexts);
  }
  return result;
}

Annotation annotate_failure(const fs::path& run_dir, const std::string& rag_id, const std::string& model_id,
                            const std::string& candidate_id, FailureCategory category, const std::string& notes) {
  const auto result = load_result(run_dir);
  const auto* cell = result.find(rag_id, model_id);
  if (!cell) throw Error(ErrorCode::kMissingLabel, fmt::format("run has no cell {} / {}", rag_id, model_id));
  const auto rec = std::find_if(cell->records.begin(), cell->records.end(),
                                [&](const ValidationRecord& r) { return r.candidate_id == candidate_id; });
  const auto label = result.labels.find(candidate_id);
  if (rec == cell->records.end() || label == result.labels.end()) {
    throw Error(ErrorCode::kMissingLabel, fmt::format("cell {} / {} has no record {}", rag_id, model_id, candidate_id));
  }
  if (const auto split = result.splits.find(candidate_id); split != result.splits.end() && split->second == Split::kHoldout) {
    throw Error(ErrorCode::kHoldoutViolation, "holdout item " + candidate_id + " is excluded from failure analysis");
  }
  if (!is_failure(*rec, label->second)) {
    throw Error(ErrorCode::kNotAFailure,
                fmt::format("{} was validated correctly ({}) in {} / {}", candidate_id,
                            label->second ? "true positive" : "true negative", rag_id, model_id));
  }

  Annotation a{utc_now(), rag_id, model_id, candidate_id, category, notes};
  const json j{{"timestamp", a.timestamp},       {"rag_id", a.rag_id},
               {"model_id", a.model_id},         {"candidate_id", a.candidate_id},
               {"category", to_string(a.category)}, {"notes", a.notes}};
  std::ofstream out(run_dir / "annotations.jsonl", std::ios::app);
  out << j.dump() << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "cannot append to annotations.jsonl");
  return a;
}

}  // namespace cfgrag::eval

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "cfgrag/app/config.hpp"
#include "cfgrag/confignet/detect.hpp"
#include "cfgrag/confignet/parse.hpp"
#include "cfgrag/error.hpp"
#include "cfgrag/eval/report.hpp"

namespace cfgrag::cli {

namespace fs = std::filesystem;

namespace {

// Error codes that mean "the input or the invocation is wrong".
bool is_usage_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::kProviderUnavailable:
    case ErrorCode::kSearchUnavailable:
    case ErrorCode::kIoError:
    case ErrorCode::kDimensionMismatch:
      return false;
    default:
      return true;
  }
}

struct Runtime {
  app::ProviderMap providers;
  std::map<std::string, corpus::HybridStore, std::less<>> stores;
  std::unique_ptr<retrieval::WebSearchClient> search;
  validator::TemplateSet templates;
  eval::Dataset dataset;
};

Runtime make_runtime(const app::RunConfig& cfg, const std::vector<const eval::RagVariant*>& variants) {
  Runtime rt;
  if (cfg.datasets.empty()) throw Error(ErrorCode::kConfigError, "datasets: at least one dataset file is required");
  rt.dataset = eval::load_datasets(cfg.datasets);
  rt.providers = app::make_providers(cfg);
  rt.search = app::make_search_client(cfg);
  rt.templates = cfg.templates_dir ? validator::TemplateSet::from_dir(*cfg.templates_dir) : validator::TemplateSet::embedded();
  for (const auto* v : variants) {
    if (v->is_vanilla() || rt.stores.count(v->embedding.provider_id)) continue;
    const auto dir = app::store_path(cfg, v->embedding.provider_id);
    if (!fs::exists(dir / "embeddings.bin")) {
      throw Error(ErrorCode::kMissingPath,
                  fmt::format("no store for provider {} at {}; run `cfgrag ingest` first", v->embedding.provider_id,
                              dir.string()));
    }
    rt.stores.emplace(v->embedding.provider_id, corpus::HybridStore::load(dir));
  }
  return rt;
}

eval::ExperimentResult run_grid(const app::RunConfig& cfg, Runtime& rt, const fs::path& out_dir,
                                std::vector<std::string> only_models, std::vector<std::string> only_variants,
                                std::ostream& err) {
  eval::ExperimentEnv env;
  for (auto& [id, store] : rt.stores) env.stores.emplace(id, &store);
  for (const auto& [id, p] : rt.providers) env.providers.emplace(id, p.get());
  env.search_client = rt.search.get();
  env.templates = &rt.templates;
  if (cfg.cache_enabled) env.cache = std::make_shared<gateway::ResponseCache>(cfg.cache_file.value_or(cfg.output_dir / "cache.jsonl"));
  fs::create_directories(out_dir);
  env.run_log = std::make_shared<gateway::RunLog>(out_dir / "run_log.jsonl");
  if (cfg.shot_embedding) env.shot_provider = rt.providers.at(*cfg.shot_embedding).get();
  env.progress = [&err](const std::string& line) { err << line << "\n"; };

  eval::ExperimentConfig ec;
  ec.run_id = cfg.run_id;
  ec.models = cfg.models;
  ec.variants = cfg.variants;
  ec.dataset = &rt.dataset;
  ec.split = cfg.split;
  ec.concurrency = cfg.concurrency;
  ec.scope_dynamic = cfg.scope_dynamic;
  ec.search = cfg.retrieval;
  ec.chunker = cfg.chunker;
  ec.rewrite = cfg.rewrite;
  ec.only_models = std::move(only_models);
  ec.only_variants = std::move(only_variants);

  auto result = eval::run_experiment(ec, env);
  eval::ReportOptions ro;
  ro.record_wall_time = cfg.record_wall_time;
  eval::emit_report(result, out_dir, ro, &rt.dataset);
  return result;
}

std::vector<const eval::RagVariant*> selected_variants(const app::RunConfig& cfg, const std::vector<std::string>& only) {
  std::vector<const eval::RagVariant*> out;
  for (const auto& v : cfg.variants) {
    if (only.empty() || std::find(only.begin(), only.end(), v.id) != only.end()) out.push_back(&v);
  }
  return out;
}

int incomplete_cells(const eval::ExperimentResult& result, std::ostream& err) {
  int n = 0;
  for (const auto& c : result.cells) {
    if (c.complete) continue;
    ++n;
    err << fmt::format("cell {}/{} incomplete: {}\n", c.rag_id, c.model_id, c.error.value_or("provider unavailable"));
  }
  return n;
}

int cmd_extract(const fs::path& root, const std::optional<fs::path>& out_file, std::string project,
                const std::optional<fs::path>& config, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(root)) {
    err << "error: project root " << root.string() << " is not a directory\n";
    return kExitUsage;
  }
  if (project.empty()) project = fs::absolute(root).lexically_normal().filename().string();
  if (project.empty()) project = "project";
  const auto extracted = confignet::extract_project(root, project);
  if (!extracted.failures.empty()) {
    err << "error: " << extracted.failures.size() << " artifact(s) could not be parsed:\n";
    for (const auto& f : extracted.failures) err << "  " << f.file_path << ": " << f.message << "\n";
    return kExitUsage;
  }
  const auto stoplist = config ? app::RunConfig::load(*config).stoplist : confignet::ValueStoplist::defaults();
  const auto candidates = confignet::detect_candidates(extracted.options, stoplist);
  std::string jsonl;
  std::size_t cross = 0;
  for (const auto& c : candidates) {
    jsonl += eval::candidate_to_json(c).dump() + "\n";
    if (c.is_cross_technology) ++cross;
  }
  if (out_file) {
    if (out_file->has_parent_path()) fs::create_directories(out_file->parent_path());
    std::ofstream f(*out_file, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIoError, "cannot write " + out_file->string());
    f << jsonl;
  } else {
    out << jsonl;
  }
  err << fmt::format("{} files, {} options, {} candidates ({} cross-technology)\n", extracted.parsed_files.size(),
                     extracted.options.size(), candidates.size(), cross);
  return kExitOk;
}

int cmd_ingest(const fs::path& config, std::ostream& out) {
  const auto cfg = app::RunConfig::load(config);
  const auto providers = app::make_providers(cfg);
  for (const auto& s : app::ingest(cfg, providers)) {
    out << fmt::format("{}: {} documents ({} empty skipped), {} chunks, {} inserted, {} replaced -> {}\n",
                       s.provider_id, s.documents, s.skipped_empty, s.chunks, s.upserts.inserted, s.upserts.replaced,
                       app::store_path(cfg, s.provider_id).string());
  }
  return kExitOk;
}

int cmd_validate(const fs::path& config, const std::string& model, const std::optional<std::string>& variant,
                 bool vanilla, const std::optional<std::string>& split, const std::optional<fs::path>& out_dir,
                 std::ostream& out, std::ostream& err) {
  auto cfg = app::RunConfig::load(config);
  if (!cfg.find_model(model)) {
    err << "error: unknown model '" << model << "'\n";
    return kExitUsage;
  }
  const std::string variant_id = vanilla ? std::string(validator::kVanillaId) : variant.value_or("");
  if (!cfg.find_variant(variant_id)) {
    if (vanilla) {
      cfg.variants.push_back(eval::RagVariant::vanilla(cfg.variants.empty() ? validator::PromptVariant::kBase
                                                                            : cfg.variants.front().prompt_variant,
                                                       cfg.variants.empty() ? 0 : cfg.variants.front().shots));
    } else {
      err << "error: unknown variant '" << variant_id << "'\n";
      return kExitUsage;
    }
  }
  if (split) cfg.split = eval::parse_split_selector(*split);
  auto rt = make_runtime(cfg, {cfg.find_variant(variant_id)});
  const auto dir = out_dir.value_or(cfg.run_dir() / "validate");
  const auto result = run_grid(cfg, rt, dir, {model}, {variant_id}, err);
  const auto* cell = result.find(variant_id, model);
  out << fmt::format("{} records -> {}\n", cell ? cell->records.size() : 0, (dir / "records.jsonl").string());
  return incomplete_cells(result, err) > 0 ? kExitProvider : kExitOk;
}

int cmd_evaluate(const fs::path& config, const std::vector<std::string>& models,
                 const std::vector<std::string>& variants, std::ostream& out, std::ostream& err) {
  const auto cfg = app::RunConfig::load(config);
  for (const auto& m : models) {
    if (!cfg.find_model(m)) {
      err << "error: unknown model '" << m << "'\n";
      return kExitUsage;
    }
  }
  for (const auto& v : variants) {
    if (!cfg.find_variant(v)) {
      err << "error: unknown variant '" << v << "'\n";
      return kExitUsage;
    }
  }
  auto rt = make_runtime(cfg, selected_variants(cfg, variants));
  const auto result = run_grid(cfg, rt, cfg.run_dir(), models, variants, err);
  out << eval::render_metrics_markdown(result);
  return incomplete_cells(result, err) > 0 ? kExitProvider : kExitOk;
}

fs::path resolve_run_dir(const std::string& run, const std::optional<fs::path>& config) {
  if (config) return app::RunConfig::load(*config).output_dir / run;
  return fs::path(run);
}

int cmd_report(const std::string& run, const std::optional<fs::path>& config, std::ostream& out) {
  const auto dir = resolve_run_dir(run, config);
  const auto result = eval::load_result(dir);
  std::optional<eval::Dataset> dataset;
  std::optional<app::RunConfig> cfg;
  if (config) {
    cfg = app::RunConfig::load(*config);
    if (!cfg->datasets.empty()) dataset = eval::load_datasets(cfg->datasets);
  }
  eval::ReportOptions ro;
  ro.record_wall_time = cfg && cfg->record_wall_time;
  eval::emit_report(result, dir, ro, dataset ? &*dataset : nullptr);
  out << eval::render_metrics_markdown(result);
  return kExitOk;
}

int cmd_annotate(const std::string& run, const std::optional<fs::path>& config, const std::string& rag,
                 const std::string& model, const std::string& candidate, const std::string& category,
                 const std::string& notes, std::ostream& out) {
  const auto dir = resolve_run_dir(run, config);
  const auto a = eval::annotate_failure(dir, rag, model, candidate, eval::parse_failure_category(category), notes);
  out << fmt::format("annotated {} {}/{} as {}\n", a.candidate_id, a.rag_id, a.model_id, eval::to_string(a.category));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Configuration dependency validation with retrieval-augmented LLMs", "cfgrag"};
  app.require_subcommand(1);

  fs::path config;
  std::string project_root;
  std::optional<fs::path> out_path;
  std::string project;
  std::string model;
  std::optional<std::string> variant;
  bool vanilla = false;
  std::optional<std::string> split;
  std::vector<std::string> models;
  std::vector<std::string> variants;
  std::string run_ref;
  std::optional<fs::path> run_config;
  std::string rag_id;
  std::string candidate;
  std::string category;
  std::string notes;

  auto* extract = app.add_subcommand("extract", "Detect dependency candidates in a project tree");
  extract->add_option("project_root", project_root, "Project directory")->required();
  extract->add_option("-o,--out", out_path, "Output JSONL (default stdout)");
  extract->add_option("--project", project, "Project name (default: directory name)");
  extract->add_option("-c,--config", run_config, "Run config (for the value stoplist)");

  auto* ingest = app.add_subcommand("ingest", "Chunk, embed and index the static corpus");
  ingest->add_option("-c,--config", config, "Run config")->required();

  auto* validate = app.add_subcommand("validate", "Validate the dataset with one model and one condition");
  validate->add_option("-c,--config", config, "Run config")->required();
  validate->add_option("--model", model, "Model id")->required();
  auto* vopt = validate->add_option("--variant", variant, "RAG variant id");
  auto* vflag = validate->add_flag("--vanilla", vanilla, "No retrieval (condition w/o)");
  vopt->excludes(vflag);
  validate->add_option("--split", split, "benchmark, holdout or all");
  validate->add_option("-o,--out", out_path, "Output directory (default <output_dir>/<run_id>/validate)");

  auto* evaluate = app.add_subcommand("evaluate", "Run the model x condition grid and write the report");
  evaluate->add_option("-c,--config", config, "Run config")->required();
  evaluate->add_option("--model", models, "Restrict to these models");
  evaluate->add_option("--variant", variants, "Restrict to these conditions");

  auto* report = app.add_subcommand("report", "Re-render tables from a finished run");
  report->add_option("run", run_ref, "Run directory, or run id with --config")->required();
  report->add_option("-c,--config", run_config, "Run config");

  auto* annotate = app.add_subcommand("annotate", "Assign a failure category to a misclassified record");
  annotate->add_option("run", run_ref, "Run directory, or run id with --config")->required();
  annotate->add_option("-c,--config", run_config, "Run config");
  annotate->add_option("--rag", rag_id, "Condition id (w/o, 1-4, ...)")->required();
  annotate->add_option("--model", model, "Model id")->required();
  annotate->add_option("--candidate", candidate, "Dataset item id")->required();
  annotate->add_option("--category", category, "Failure category id")->required();
  annotate->add_option("--notes", notes, "Free text");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help is delivered as a parse error with exit code 0.
    if (e.get_exit_code() == 0) {
      for (auto* sub : app.get_subcommands()) out << sub->help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const bool is_ingest = ingest->parsed();
  try {
    if (extract->parsed()) return cmd_extract(project_root, out_path, project, run_config, out, err);
    if (is_ingest) return cmd_ingest(config, out);
    if (validate->parsed()) {
      if (!variant && !vanilla) {
        err << "error: validate needs --variant or --vanilla\n";
        return kExitUsage;
      }
      return cmd_validate(config, model, variant, vanilla, split, out_path, out, err);
    }
    if (evaluate->parsed()) return cmd_evaluate(config, models, variants, out, err);
    if (report->parsed()) return cmd_report(run_ref, run_config, out);
    if (annotate->parsed()) return cmd_annotate(run_ref, run_config, rag_id, model, candidate, category, notes, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (is_usage_error(e.code())) return kExitUsage;
    return is_ingest ? kExitIngest : kExitProvider;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return is_ingest ? kExitIngest : kExitProvider;
  }
  return kExitUsage;
}

}  // namespace cfgrag::cli

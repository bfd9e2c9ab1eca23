// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/eval/dataset.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <set>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::eval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CategoryName {
  FailureCategory category;
  std::string_view id;
  std::string_view display;
};

constexpr std::array<CategoryName, 8> kCategoryNames{{
    {FailureCategory::kInheritanceAndOverrides, "inheritance_and_overrides", "Inheritance and Overrides"},
    {FailureCategory::kConfigurationConsistency, "configuration_consistency", "Configuration Consistency"},
    {FailureCategory::kResourceSharing, "resource_sharing", "Resource Sharing"},
    {FailureCategory::kAmbiguousOptionValues, "ambiguous_option_values", "Ambiguous Option Values"},
    {FailureCategory::kPortMapping, "port_mapping", "Port Mapping"},
    {FailureCategory::kContextAvailabilityRetrievalUtilization, "context_availability_retrieval_utilization",
     "Context Availability, Retrieval and Utilization"},
    {FailureCategory::kIndependentTechnologiesServices, "independent_technologies_services",
     "Independent Technologies and Services"},
    {FailureCategory::kOthers, "others", "Others"},
}};

[[noreturn]] void violation(int line, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, what, line);
}

const json& field(const json& j, std::string_view key, int line, const char* where) {
  const auto it = j.find(key);
  if (it == j.end()) violation(line, fmt::format("missing field \"{}{}\"", where, key));
  return *it;
}

std::string string_field(const json& j, std::string_view key, int line, const char* where = "") {
  const auto& v = field(j, key, line, where);
  if (v.is_string()) return v.get<std::string>();
  // Values in config files are often numbers or booleans; keep their text.
  if (v.is_number() || v.is_boolean()) return v.dump();
  violation(line, fmt::format("field \"{}{}\" must be a string", where, key));
}

bool bool_field(const json& j, std::string_view key, int line) {
  const auto& v = field(j, key, line, "");
  if (!v.is_boolean()) violation(line, fmt::format("field \"{}\" must be a boolean", key));
  return v.get<bool>();
}

confignet::ConfigOption parse_option(const json& j, const std::string& project, std::string_view key, int line) {
  const auto& o = field(j, key, line, "");
  if (!o.is_object()) violation(line, fmt::format("field \"{}\" must be an object", key));
  const auto where = std::string(key) + ".";
  const auto file = string_field(o, "file", line, where.c_str());
  const auto tech = string_field(o, "technology", line, where.c_str());
  const auto name = string_field(o, "name", line, where.c_str());
  const auto value = string_field(o, "value", line, where.c_str());
  int opt_line = 1;
  if (o.contains("line")) {
    if (!o["line"].is_number_integer()) violation(line, where + "line must be an integer");
    opt_line = o["line"].get<int>();
  }
  return confignet::make_option(project, file, confignet::Technology::parse(tech), name, value, opt_line);
}

json option_to_json(const confignet::ConfigOption& o) {
  return json{{"file", o.file_path},
              {"technology", o.technology.name()},
              {"name", o.name},
              {"value", o.raw_value},
              {"line", o.line}};
}

}  // namespace

std::string_view to_string(Split s) noexcept { return s == Split::kBenchmark ? "benchmark" : "holdout"; }

Split parse_split(std::string_view name) {
  if (name == "benchmark") return Split::kBenchmark;
  if (name == "holdout") return Split::kHoldout;
  throw Error(ErrorCode::kInvalidArgument, "unknown split " + std::string(name));
}

SplitSelector parse_split_selector(std::string_view name) {
  if (name == "benchmark") return SplitSelector::kBenchmark;
  if (name == "holdout") return SplitSelector::kHoldout;
  if (name == "all") return SplitSelector::kAll;
  throw Error(ErrorCode::kInvalidArgument, "unknown split selector " + std::string(name));
}

bool selects(SplitSelector sel, Split s) noexcept {
  return sel == SplitSelector::kAll || (sel == SplitSelector::kBenchmark) == (s == Split::kBenchmark);
}

std::string_view to_string(FailureCategory c) noexcept {
  for (const auto& n : kCategoryNames) {
    if (n.category == c) return n.id;
  }
  return "others";
}

std::string_view display_name(FailureCategory c) noexcept {
  for (const auto& n : kCategoryNames) {
    if (n.category == c) return n.display;
  }
  return "Others";
}

FailureCategory parse_failure_category(std::string_view name) {
  for (const auto& n : kCategoryNames) {
    if (n.id == name) return n.category;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown failure category " + std::string(name));
}

const LabeledDependency* Dataset::find(std::string_view id) const {
  for (const auto& it : items) {
    if (it.candidate.id == id) return &it;
  }
  return nullptr;
}

LabeledDependency parse_item(const json& j, int line) {
  if (!j.is_object()) violation(line, "line is not a JSON object");
  LabeledDependency item;
  const auto id = string_field(j, "id", line);
  if (id.empty()) violation(line, "field \"id\" is empty");
  const auto project = string_field(j, "project", line);
  auto a = parse_option(j, project, "option_a", line);
  auto b = parse_option(j, project, "option_b", line);
  item.candidate.id = id;
  item.candidate.is_cross_technology = !(a.technology == b.technology);
  item.candidate.option_a = std::move(a);
  item.candidate.option_b = std::move(b);
  item.label = bool_field(j, "label", line);
  if (j.contains("borderline")) item.borderline = bool_field(j, "borderline", line);
  if (j.contains("notes") && !j["notes"].is_null()) item.notes = string_field(j, "notes", line);
  try {
    item.split = parse_split(string_field(j, "split", line));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaViolation) throw;
    violation(line, "field \"split\" must be benchmark or holdout");
  }
  if (j.contains("failure_category") && !j["failure_category"].is_null()) {
    try {
      item.failure_category = parse_failure_category(string_field(j, "failure_category", line));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSchemaViolation) throw;
      violation(line, "field \"failure_category\" is not a known category");
    }
  }
  return item;
}

json item_to_json(const LabeledDependency& item) {
  json j{{"id", item.candidate.id},
         {"project", item.candidate.option_a.project},
         {"option_a", option_to_json(item.candidate.option_a)},
         {"option_b", option_to_json(item.candidate.option_b)},
         {"label", item.label},
         {"borderline", item.borderline},
         {"split", to_string(item.split)}};
  j["notes"] = item.notes ? json(*item.notes) : json(nullptr);
  if (item.failure_category) j["failure_category"] = to_string(*item.failure_category);
  return j;
}

json candidate_to_json(const confignet::DependencyCandidate& c) {
  return json{{"id", c.id},
              {"project", c.option_a.project},
              {"option_a", option_to_json(c.option_a)},
              {"option_b", option_to_json(c.option_b)},
              {"cross_technology", c.is_cross_technology}};
}

Dataset load_dataset(const fs::path& path) {
  const fs::path p[] = {path};
  return load_datasets(p);
}

Dataset load_datasets(std::span<const fs::path> paths) {
  Dataset ds;
  std::set<std::string> seen;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kMissingPath, "dataset " + path.string() + " not found");
    std::string text;
    int line_no = 0;
    while (std::getline(in, text)) {
      ++line_no;
      if (util::trim(text).empty()) continue;
      const auto j = json::parse(text, nullptr, false);
      if (j.is_discarded()) {
        throw Error(ErrorCode::kSchemaViolation, fmt::format("{}: line is not valid JSON", path.string()), line_no);
      }
      auto item = parse_item(j, line_no);
      if (!seen.insert(item.candidate.id).second) {
        throw Error(ErrorCode::kDuplicateId, fmt::format("{}: duplicate id {}", path.string(), item.candidate.id),
                    line_no);
      }
      (item.split == Split::kBenchmark ? ds.benchmark_count : ds.holdout_count)++;
      ds.items.push_back(std::move(item));
    }
  }
  return ds;
}

}  // namespace cfgrag::eval

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cfgrag/confignet/option.hpp"

namespace cfgrag::eval {

enum class Split { kBenchmark, kHoldout };

std::string_view to_string(Split s) noexcept;
Split parse_split(std::string_view name);

enum class SplitSelector { kBenchmark, kHoldout, kAll };
SplitSelector parse_split_selector(std::string_view name);
bool selects(SplitSelector sel, Split s) noexcept;

enum class FailureCategory {
  kInheritanceAndOverrides,
  kConfigurationConsistency,
  kResourceSharing,
  kAmbiguousOptionValues,
  kPortMapping,
  kContextAvailabilityRetrievalUtilization,
  kIndependentTechnologiesServices,
  kOthers,
};

inline constexpr std::array<FailureCategory, 8> kFailureCategories{
    FailureCategory::kInheritanceAndOverrides,
    FailureCategory::kConfigurationConsistency,
    FailureCategory::kResourceSharing,
    FailureCategory::kAmbiguousOptionValues,
    FailureCategory::kPortMapping,
    FailureCategory::kContextAvailabilityRetrievalUtilization,
    FailureCategory::kIndependentTechnologiesServices,
    FailureCategory::kOthers,
};

std::string_view to_string(FailureCategory c) noexcept;
/// Human-readable row label, e.g. "Port Mapping".
std::string_view display_name(FailureCategory c) noexcept;
FailureCategory parse_failure_category(std::string_view name);

struct LabeledDependency {
  confignet::DependencyCandidate candidate;  // candidate.id is the item id
  bool label = false;
  bool borderline = false;
  std::optional<std::string> notes;
  Split split = Split::kBenchmark;
  std::optional<FailureCategory> failure_category;
};

struct Dataset {
  std::vector<LabeledDependency> items;  // file order
  std::size_t benchmark_count = 0;
  std::size_t holdout_count = 0;

  const LabeledDependency* find(std::string_view id) const;
};

/// One JSON Lines object:
///   {"id", "project", "option_a": {"file", "technology", "name", "value",
///    "line"?}, "option_b": {...}, "label", "borderline"?, "notes"?, "split",
///    "failure_category"?}
/// Throws kSchemaViolation naming the field, with `line` set.
LabeledDependency parse_item(const nlohmann::json& j, int line);
nlohmann::json item_to_json(const LabeledDependency& item);

/// Throws kSchemaViolation (with line), kDuplicateId, kMissingPath.
Dataset load_dataset(const std::filesystem::path& path);
/// Concatenation of several files; ids must be unique across all of them.
Dataset load_datasets(std::span<const std::filesystem::path> paths);

/// Unlabeled candidate line as written by extraction; same option layout.
nlohmann::json candidate_to_json(const confignet::DependencyCandidate& c);

}  // namespace cfgrag::eval

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/confignet/detect.hpp"

#include <algorithm>
#include <map>

#include "cfgrag/error.hpp"

namespace cfgrag::confignet {

ValueStoplist ValueStoplist::defaults() {
  return {true, {"", "0", "1", "localhost", "/", "latest", "utf-8"}};
}

bool ValueStoplist::excludes(const NormalizedValue& v) const {
  if (exclude_booleans && v.kind == ValueKind::kBoolean) return true;
  return canonical_values.contains(v.canonical);
}

std::vector<DependencyCandidate> detect_candidates(std::span<const ConfigOption> options,
                                                   const ValueStoplist& stoplist) {
  if (!options.empty()) {
    const auto& project = options.front().project;
    for (const auto& o : options) {
      if (o.project != project) {
        throw Error(ErrorCode::kInvalidArgument, "options span several projects: " + project + ", " + o.project);
      }
    }
  }

  std::map<NormalizedValue, std::vector<const ConfigOption*>> by_value;
  for (const auto& o : options) {
    if (!stoplist.excludes(o.normalized)) by_value[o.normalized].push_back(&o);
  }

  std::vector<DependencyCandidate> out;
  for (const auto& [value, group] : by_value) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        const ConfigOption& a = *group[i];
        const ConfigOption& b = *group[j];
        if (a.file_path == b.file_path && a.name == b.name) continue;
        out.push_back(make_candidate(a, b));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  // Repeated coordinates (e.g. one key in two YAML documents) collapse to one id.
  out.erase(std::unique(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.id == y.id; }),
            out.end());
  return out;
}

}  // namespace cfgrag::confignet

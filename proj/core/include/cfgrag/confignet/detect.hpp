// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "cfgrag/confignet/option.hpp"

namespace cfgrag::confignet {

/// Values too common to signal a dependency. Matching is on the normalized
/// canonical form; booleans are excluded by kind when `exclude_booleans`.
struct ValueStoplist {
  bool exclude_booleans = true;
  std::set<std::string> canonical_values;

  static ValueStoplist defaults();
  bool excludes(const NormalizedValue& v) const;
};

/// Value-equality linking: one candidate per unordered pair of options with
/// equal normalized values, skipping stoplisted values and same-file pairs
/// with the same name. Sorted by id.
std::vector<DependencyCandidate> detect_candidates(std::span<const ConfigOption> options,
                                                   const ValueStoplist& stoplist = ValueStoplist::defaults());

}  // namespace cfgrag::confignet

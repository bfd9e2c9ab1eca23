// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace cfgrag::validator {

enum class ParseStatus { kOk, kRepaired, kDefaulted };

std::string_view to_string(ParseStatus s) noexcept;
ParseStatus parse_parse_status(std::string_view name);

struct Verdict {
  std::string plan;
  std::string rationale;
  int uncertainty = 0;  // 0 completely uncertain .. 10 absolutely certain
  bool is_dependency = false;
  ParseStatus parse_status = ParseStatus::kDefaulted;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Never throws. The whole text as a JSON object with string plan and
/// rationale, integer uncertainty in [0, 10] and boolean isDependency is ok.
/// Otherwise embedded {...} objects are tried in order with lenient types
/// (numeric strings, integral floats, "true"/"false"); the first that fits is
/// repaired. Anything else is defaulted: not a dependency, uncertainty 0.
Verdict parse_verdict(std::string_view text);

}  // namespace cfgrag::validator

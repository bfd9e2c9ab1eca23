// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cfgrag/confignet/option.hpp"

namespace cfgrag::confignet::detail {

/// Parser output before project/file/technology are attached.
struct RawOption {
  std::string name;
  std::string value;
  int line;
};

std::vector<RawOption> parse_yaml(std::string_view content);
std::vector<RawOption> parse_properties(std::string_view content);
std::vector<RawOption> parse_dockerfile(std::string_view content);
std::vector<RawOption> parse_pom(std::string_view content);

/// Replaces whitespace inside a name component with '_'.
std::string sanitize_name(std::string_view name);

}  // namespace cfgrag::confignet::detail

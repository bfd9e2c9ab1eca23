// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cfgrag::util {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
bool starts_with_ci(std::string_view s, std::string_view prefix) noexcept;

/// Whitespace-delimited tokens with their byte offsets in the source text.
struct TokenSpan {
  std::size_t begin;
  std::size_t end;
};
std::vector<TokenSpan> whitespace_tokens(std::string_view text);
std::vector<std::string> split_whitespace(std::string_view text);

/// Lower-cased alphanumeric sub-tokens of an option name. Splits on any
/// non-alphanumeric character and on camelCase boundaries, so "serverPort",
/// "SERVER_PORT" and "server.port" all yield {"server", "port"}.
std::vector<std::string> name_subtokens(std::string_view name);

bool valid_utf8(std::string_view s) noexcept;

std::string replace_all(std::string s, std::string_view from, std::string_view to);

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// 64-bit FNV-1a with a caller-supplied offset basis.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

}  // namespace cfgrag::util

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <string>

#include "cfgrag/error.hpp"
#include "parsers.hpp"

namespace cfgrag::confignet::detail {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\f'; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

struct LogicalLine {
  std::string text;
  int line;
};

/// Joins backslash-continued physical lines, dropping comment and blank lines.
std::vector<LogicalLine> logical_lines(std::string_view content) {
  std::vector<LogicalLine> out;
  std::string current;
  int start_line = 0;
  bool continuing = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t lead = 0;
    while (lead < line.size() && is_ws(line[lead])) ++lead;
    line.remove_prefix(lead);
    if (!continuing) {
      if (line.empty() || line.front() == '#' || line.front() == '!') {
        if (nl == content.size()) break;
        continue;
      }
      start_line = line_no;
    }

    std::size_t trailing = 0;
    for (auto it = line.rbegin(); it != line.rend() && *it == '\\'; ++it) ++trailing;
    if (trailing % 2 == 1) {
      current.append(line.substr(0, line.size() - 1));
      continuing = true;
    } else {
      current.append(line);
      out.push_back({std::move(current), start_line});
      current.clear();
      continuing = false;
    }
    if (nl == content.size()) break;
  }
  if (continuing) out.push_back({std::move(current), start_line});
  return out;
}

std::string unescape(std::string_view s, int line) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 >= s.size()) {
      out.push_back(s[i]);
      continue;
    }
    const char c = s[++i];
    switch (c) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 'f': out.push_back('\f'); break;
      case 'u': {
        if (i + 4 >= s.size()) {
          throw Error(ErrorCode::kMalformedArtifact, "truncated \\u escape", line);
        }
        unsigned cp = 0;
        for (int k = 1; k <= 4; ++k) {
          const int h = hex_value(s[i + k]);
          if (h < 0) throw Error(ErrorCode::kMalformedArtifact, "invalid \\u escape", line);
          cp = cp * 16 + static_cast<unsigned>(h);
        }
        append_utf8(out, cp);
        i += 4;
        break;
      }
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<RawOption> parse_properties(std::string_view content) {
  std::vector<RawOption> out;
  for (const auto& logical : logical_lines(content)) {
    const std::string_view text = logical.text;
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (c == '\\') {
        i += 2;
        continue;
      }
      if (c == '=' || c == ':' || is_ws(c)) break;
      ++i;
    }
    i = std::min(i, text.size());
    const std::size_t key_end = i;
    while (i < text.size() && is_ws(text[i])) ++i;
    if (i < text.size() && (text[i] == '=' || text[i] == ':')) ++i;
    while (i < text.size() && is_ws(text[i])) ++i;

    std::string key = sanitize_name(unescape(text.substr(0, key_end), logical.line));
    if (key.empty()) throw Error(ErrorCode::kMalformedArtifact, "property without a key", logical.line);
    out.push_back({std::move(key), unescape(text.substr(i), logical.line), logical.line});
  }
  return out;
}

}  // namespace cfgrag::confignet::detail

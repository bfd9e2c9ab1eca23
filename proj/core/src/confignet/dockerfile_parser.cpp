// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include <nlohmann/json.hpp>

#include <cctype>
#include <optional>
#include <utility>
#include <string>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"
#include "parsers.hpp"

namespace cfgrag::confignet::detail {

namespace {

struct Instruction {
  std::string keyword;  // upper-cased
  std::string args;
  int line;
};

std::vector<Instruction> instructions(std::string_view content) {
  std::vector<Instruction> out;
  std::string pending;
  int pending_line = 0;
  bool continuing = false;
  int line_no = 0;
  std::size_t pos = 0;

  auto finish = [&] {
    const std::string_view text = util::trim(pending);
    if (!text.empty()) {
      std::size_t i = 0;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      const std::string keyword = util::to_lower(text.substr(0, i));
      for (char c : keyword) {
        if (!std::isalpha(static_cast<unsigned char>(c))) {
          throw Error(ErrorCode::kMalformedArtifact, "invalid instruction '" + std::string(text.substr(0, i)) + "'",
                      pending_line);
        }
      }
      std::string upper(keyword);
      for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      out.push_back({upper, std::string(util::trim(text.substr(i))), pending_line});
    }
    pending.clear();
    continuing = false;
  };

  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const std::string_view trimmed = util::trim(line);
    if (trimmed.starts_with('#')) {
      if (nl == content.size()) break;
      continue;  // comments are dropped, including inside continuations
    }
    if (!continuing) {
      if (trimmed.empty()) {
        if (nl == content.size()) break;
        continue;
      }
      pending_line = line_no;
    }
    std::string_view body = util::trim(line);
    if (body.ends_with('\\')) {
      body.remove_suffix(1);
      pending.append(body);
      pending.push_back(' ');
      continuing = true;
    } else {
      pending.append(body);
      finish();
    }
    if (nl == content.size()) break;
  }
  if (continuing) finish();
  return out;
}

/// Shell-like word splitting honoring quotes and backslash escapes.
std::vector<std::string> words(std::string_view s, int line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else if (c == '\\' && quote == '"' && i + 1 < s.size()) {
        cur.push_back(s[++i]);
      } else {
        cur.push_back(c);
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
      in_word = true;
    } else if (c == '\\' && i + 1 < s.size()) {
      cur.push_back(s[++i]);
      in_word = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_word) out.push_back(std::exchange(cur, {}));
      in_word = false;
    } else {
      cur.push_back(c);
      in_word = true;
    }
  }
  if (quote) throw Error(ErrorCode::kMalformedArtifact, "unterminated quote", line);
  if (in_word) out.push_back(std::move(cur));
  return out;
}

std::string indexed(const std::string& base, std::size_t i, std::size_t n) {
  return n == 1 ? base : base + "[" + std::to_string(i) + "]";
}

/// "K=V K2=V2" pairs, or the legacy single "K V" form when no '=' appears in
/// the first word.
void key_values(const Instruction& ins, std::vector<RawOption>& out, bool allow_bare_key) {
  const auto ws = words(ins.args, ins.line);
  if (ws.empty()) throw Error(ErrorCode::kMalformedArtifact, ins.keyword + " without arguments", ins.line);
  if (ws.front().find('=') == std::string::npos) {
    if (ws.size() == 1 && allow_bare_key) {
      out.push_back({ins.keyword + "." + sanitize_name(ws.front()), "", ins.line});
      return;
    }
    if (ws.size() == 1) throw Error(ErrorCode::kMalformedArtifact, ins.keyword + " without a value", ins.line);
    // Legacy form: the value is the raw remainder after the key.
    std::string_view rest = util::trim(ins.args);
    const auto space = rest.find_first_of(" \t");
    out.push_back({ins.keyword + "." + sanitize_name(ws.front()),
                   std::string(util::trim(rest.substr(space))), ins.line});
    return;
  }
  for (const auto& w : ws) {
    const auto eq = w.find('=');
    if (eq == std::string::npos) {
      if (!allow_bare_key) throw Error(ErrorCode::kMalformedArtifact, "expected key=value in " + ins.keyword, ins.line);
      out.push_back({ins.keyword + "." + sanitize_name(w), "", ins.line});
      continue;
    }
    if (eq == 0) throw Error(ErrorCode::kMalformedArtifact, "empty key in " + ins.keyword, ins.line);
    out.push_back({ins.keyword + "." + sanitize_name(w.substr(0, eq)), w.substr(eq + 1), ins.line});
  }
}

/// Exec form (JSON array) if the arguments parse as one, else nullopt.
std::optional<std::vector<std::string>> exec_form(const std::string& args) {
  if (!args.starts_with('[')) return std::nullopt;
  auto j = nlohmann::json::parse(args, nullptr, false);
  if (j.is_discarded() || !j.is_array()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) return std::nullopt;
    out.push_back(e.get<std::string>());
  }
  return out;
}

void copy_like(const Instruction& ins, std::vector<RawOption>& out) {
  std::vector<std::string> args;
  if (auto exec = exec_form(ins.args)) {
    args = std::move(*exec);
  } else {
    for (auto& w : words(ins.args, ins.line)) {
      if (!w.starts_with("--")) args.push_back(std::move(w));
    }
  }
  if (args.size() < 2) throw Error(ErrorCode::kMalformedArtifact, ins.keyword + " needs source and destination", ins.line);
  const std::size_t sources = args.size() - 1;
  for (std::size_t i = 0; i < sources; ++i) {
    out.push_back({indexed(ins.keyword + ".source", i, sources), args[i], ins.line});
  }
  out.push_back({ins.keyword + ".destination", args.back(), ins.line});
}

}  // namespace

std::vector<RawOption> parse_dockerfile(std::string_view content) {
  std::vector<RawOption> out;
  for (const auto& ins : instructions(content)) {
    const std::string& k = ins.keyword;
    const bool known = k == "FROM" || k == "EXPOSE" || k == "ENV" || k == "ARG" || k == "LABEL" ||
                       k == "WORKDIR" || k == "COPY" || k == "ADD" || k == "CMD";
    if (!known) continue;
    if (ins.args.empty()) throw Error(ErrorCode::kMalformedArtifact, k + " without arguments", ins.line);

    if (k == "FROM") {
      for (const auto& w : words(ins.args, ins.line)) {
        if (w.starts_with("--")) continue;
        out.push_back({"FROM", w, ins.line});
        break;
      }
    } else if (k == "EXPOSE") {
      const auto ports = words(ins.args, ins.line);
      for (std::size_t i = 0; i < ports.size(); ++i) out.push_back({indexed("EXPOSE", i, ports.size()), ports[i], ins.line});
    } else if (k == "ENV" || k == "LABEL") {
      key_values(ins, out, /*allow_bare_key=*/false);
    } else if (k == "ARG") {
      key_values(ins, out, /*allow_bare_key=*/true);
    } else if (k == "WORKDIR") {
      out.push_back({"WORKDIR", ins.args, ins.line});
    } else if (k == "COPY" || k == "ADD") {
      copy_like(ins, out);
    } else if (k == "CMD") {
      if (auto exec = exec_form(ins.args)) {
        for (std::size_t i = 0; i < exec->size(); ++i) out.push_back({"CMD[" + std::to_string(i) + "]", (*exec)[i], ins.line});
      } else {
        out.push_back({"CMD", ins.args, ins.line});
      }
    }
  }
  return out;
}

}  // namespace cfgrag::confignet::detail

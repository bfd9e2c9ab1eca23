// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/validator/prompt.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::validator {

namespace detail {
extern const std::string_view k_prompt_base;
extern const std::string_view k_prompt_refined;
}  // namespace detail

namespace fs = std::filesystem;

namespace {

bool is_placeholder_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

std::string one_line(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '\n', ' ');
  std::replace(out.begin(), out.end(), '\r', ' ');
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kTemplateMissing, "prompt template " + p.string() + " not found");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::array<std::string, 5> split_sections(std::string_view tpl, PromptVariant variant) {
  std::array<std::string, 5> out;
  int current = -1;
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    const auto eol = std::min(tpl.find('\n', pos), tpl.size());
    const auto line = tpl.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.starts_with("### ")) {
      ++current;
      if (current >= 5 || util::trim(line.substr(4)) != to_string(kSectionOrder[current])) {
        throw Error(ErrorCode::kTemplateMissing,
                    fmt::format("{} template: unexpected section header '{}'", to_string(variant), line));
      }
      continue;
    }
    if (current < 0) {
      if (!util::trim(line).empty()) {
        throw Error(ErrorCode::kTemplateMissing, fmt::format("{} template: text before the first section", to_string(variant)));
      }
      continue;
    }
    out[current].append(line).push_back('\n');
  }
  if (current != 4) {
    throw Error(ErrorCode::kTemplateMissing, fmt::format("{} template has {} of 5 sections", to_string(variant), current + 1));
  }
  return out;
}

}  // namespace

std::string_view to_string(PromptVariant v) noexcept { return v == PromptVariant::kBase ? "base" : "refined"; }

PromptVariant parse_prompt_variant(std::string_view name) {
  if (name == "base") return PromptVariant::kBase;
  if (name == "refined") return PromptVariant::kRefined;
  throw Error(ErrorCode::kConfigError, "unknown prompt variant " + std::string(name));
}

std::string_view to_string(SectionKind k) noexcept {
  switch (k) {
    case SectionKind::kSystemMessage: return "system_message";
    case SectionKind::kDependencyDefinition: return "dependency_definition";
    case SectionKind::kRetrievedContext: return "retrieved_context";
    case SectionKind::kValidationInstruction: return "validation_instruction";
    case SectionKind::kResponseFormat: return "response_format";
  }
  return "";
}

std::vector<gateway::ChatMessage> Prompt::messages() const {
  std::string user;
  for (std::size_t i = 1; i < sections.size(); ++i) {
    if (!user.empty()) user += "\n\n";
    user += sections[i].text;
  }
  return {{"system", sections[0].text}, {"user", user}};
}

std::string Prompt::text() const { return gateway::render_messages(messages()); }

std::string Prompt::sha256() const { return util::sha256_hex(text()); }

const TemplateSet& TemplateSet::embedded() {
  static const TemplateSet set{std::string(detail::k_prompt_base), std::string(detail::k_prompt_refined)};
  return set;
}

TemplateSet TemplateSet::from_dir(const fs::path& dir) {
  return {read_file(dir / "prompt_base.txt"), read_file(dir / "prompt_refined.txt")};
}

std::string fill_placeholders(std::string_view text, const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      std::size_t j = i + 1;
      while (j < text.size() && is_placeholder_char(text[j])) ++j;
      if (j > i + 1 && j < text.size() && text[j] == '}') {
        const auto name = text.substr(i + 1, j - i - 1);
        const auto it = values.find(name);
        if (it == values.end()) {
          throw Error(ErrorCode::kPlaceholderUnfilled, fmt::format("no value for placeholder {{{}}}", name));
        }
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

std::string candidate_summary(const confignet::DependencyCandidate& c) {
  const auto& a = c.option_a;
  const auto& b = c.option_b;
  return fmt::format("{} option {} = {} ({}) | {} option {} = {} ({})", a.technology.name(), a.name,
                     one_line(a.raw_value), a.file_path, b.technology.name(), b.name, one_line(b.raw_value),
                     b.file_path);
}

std::string render_context(const retrieval::ContextSlots& slots) {
  if (slots.slots.empty()) return "No additional context provided.";
  std::string out;
  for (std::size_t i = 0; i < slots.slots.size(); ++i) {
    if (i) out += "\n\n";
    out += fmt::format("[Context {} | {}]\n{}", i + 1, corpus::to_string(slots.slots[i].source_kind),
                       util::trim(slots.slots[i].text));
  }
  return out;
}

Prompt build_prompt(const confignet::DependencyCandidate& candidate, const retrieval::ContextSlots& slots,
                    PromptVariant variant, std::span<const ShotExample> shots, const TemplateSet& templates) {
  if (!shots.empty() && shots.size() != 2) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("expected 0 or 2 shot examples, got {}", shots.size()));
  }
  const auto& tpl = templates.for_variant(variant);
  if (util::trim(tpl).empty()) {
    throw Error(ErrorCode::kTemplateMissing, fmt::format("{} template is empty", to_string(variant)));
  }

  std::string shot_text;
  if (!shots.empty()) {
    shot_text = "Labeled examples of similar pairs:";
    for (std::size_t i = 0; i < shots.size(); ++i) {
      shot_text += fmt::format("\nExample {} (isDependency: {}): {}", i + 1, shots[i].label ? "true" : "false",
                               shots[i].summary);
    }
  }

  const auto& a = candidate.option_a;
  const auto& b = candidate.option_b;
  const std::map<std::string, std::string, std::less<>> values{
      {"project", a.project},
      {"tech_a", a.technology.name()},
      {"name_a", a.name},
      {"value_a", one_line(a.raw_value)},
      {"file_a", a.file_path},
      {"tech_b", b.technology.name()},
      {"name_b", b.name},
      {"value_b", one_line(b.raw_value)},
      {"file_b", b.file_path},
      {"context", render_context(slots)},
      {"shots", shot_text},
  };

  const auto raw = split_sections(tpl, variant);
  Prompt p;
  p.variant = variant;
  p.shot_count = shots.size();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    p.sections[i].kind = kSectionOrder[i];
    p.sections[i].text = std::string(util::trim(fill_placeholders(raw[i], values)));
  }
  return p;
}

std::vector<ShotExample> select_shots(const confignet::DependencyCandidate& candidate,
                                      std::span<const ShotExample> pool, const corpus::EmbeddingProvider& provider,
                                      std::size_t n) {
  for (const auto& s : pool) {
    if (s.from_holdout) {
      throw Error(ErrorCode::kHoldoutViolation, "shot pool contains holdout item " + s.id);
    }
  }
  if (n == 0) return {};

  std::vector<const ShotExample*> eligible;
  for (const auto& s : pool) {
    if (s.id != candidate.id) eligible.push_back(&s);
  }
  if (eligible.size() < n) {
    throw Error(ErrorCode::kPoolTooSmall,
                fmt::format("shot pool has {} eligible examples, {} requested", eligible.size(), n));
  }

  const auto query = corpus::embed_one(candidate_summary(candidate), provider);
  std::vector<std::pair<double, const ShotExample*>> scored;
  scored.reserve(eligible.size());
  for (const auto* s : eligible) scored.emplace_back(corpus::cosine(query, s->embedding), s);
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    [](const auto& x, const auto& y) {
                      if (x.first != y.first) return x.first > y.first;
                      return x.second->id < y.second->id;
                    });
  std::vector<ShotExample> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(*scored[i].second);
  return out;
}

}  // namespace cfgrag::validator

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfgrag/confignet/option.hpp"
#include "cfgrag/corpus/embedding.hpp"
#include "cfgrag/gateway/model.hpp"
#include "cfgrag/retrieval/search.hpp"

namespace cfgrag::validator {

enum class PromptVariant { kBase, kRefined };

std::string_view to_string(PromptVariant v) noexcept;
PromptVariant parse_prompt_variant(std::string_view name);

enum class SectionKind {
  kSystemMessage,
  kDependencyDefinition,
  kRetrievedContext,
  kValidationInstruction,
  kResponseFormat,
};

inline constexpr std::array<SectionKind, 5> kSectionOrder{
    SectionKind::kSystemMessage, SectionKind::kDependencyDefinition, SectionKind::kRetrievedContext,
    SectionKind::kValidationInstruction, SectionKind::kResponseFormat};

std::string_view to_string(SectionKind k) noexcept;

struct PromptSection {
  SectionKind kind = SectionKind::kSystemMessage;
  std::string text;
};

struct Prompt {
  std::array<PromptSection, 5> sections;
  PromptVariant variant = PromptVariant::kBase;
  std::size_t shot_count = 0;

  /// System message as the system turn, the other four sections joined by
  /// blank lines as the user turn.
  std::vector<gateway::ChatMessage> messages() const;
  /// Full rendered text; its SHA-256 is the record's prompt hash.
  std::string text() const;
  std::string sha256() const;
};

/// Raw template text per variant. Templates are plain text with one
/// "### <section_kind>" header per section, in the fixed order, and
/// {placeholder} fields.
struct TemplateSet {
  std::string base;
  std::string refined;

  /// Copies compiled into the library.
  static const TemplateSet& embedded();
  /// Reads prompt_base.txt and prompt_refined.txt; kTemplateMissing if absent.
  static TemplateSet from_dir(const std::filesystem::path& dir);

  const std::string& for_variant(PromptVariant v) const { return v == PromptVariant::kBase ? base : refined; }
};

/// Replaces every {name} whose name is lower-case letters and underscores.
/// Values are inserted verbatim and never rescanned. kPlaceholderUnfilled
/// when a name has no value.
std::string fill_placeholders(std::string_view text, const std::map<std::string, std::string, std::less<>>& values);

struct ShotExample {
  std::string id;
  std::string summary;  // technologies, names and values of the pair
  bool label = false;
  corpus::Embedding embedding;
  bool from_holdout = false;
};

/// One-line description of a candidate used for shot similarity.
std::string candidate_summary(const confignet::DependencyCandidate& c);

/// Renders "[Context i | source_kind]" blocks, or the no-context line.
std::string render_context(const retrieval::ContextSlots& slots);

/// kInvalidArgument unless shots.size() is 0 or 2.
Prompt build_prompt(const confignet::DependencyCandidate& candidate, const retrieval::ContextSlots& slots,
                    PromptVariant variant, std::span<const ShotExample> shots,
                    const TemplateSet& templates = TemplateSet::embedded());

/// Top-n pool entries by cosine to the candidate summary embedding, ties by
/// id; the candidate's own id is dropped first. kHoldoutViolation if the pool
/// holds a holdout example, kPoolTooSmall if fewer than n remain.
std::vector<ShotExample> select_shots(const confignet::DependencyCandidate& candidate,
                                      std::span<const ShotExample> pool, const corpus::EmbeddingProvider& provider,
                                      std::size_t n = 2);

}  // namespace cfgrag::validator

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/confignet/parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"
#include "parsers.hpp"

namespace cfgrag::confignet {

namespace fs = std::filesystem;

namespace detail {

std::string sanitize_name(std::string_view name) {
  std::string out(util::trim(name));
  for (char& c : out) {
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  }
  return out;
}

}  // namespace detail

std::optional<ArtifactKind> detect_artifact_kind(std::string_view file_path) {
  const std::string base = util::to_lower(fs::path(std::string(file_path)).filename().string());
  auto has_ext = [&](std::string_view ext) { return base.ends_with(ext); };
  const bool yaml = has_ext(".yml") || has_ext(".yaml");

  if (base == "dockerfile" || base.starts_with("dockerfile.") || has_ext(".dockerfile")) {
    return ArtifactKind::kDockerfile;
  }
  if (base == "pom.xml") return ArtifactKind::kPom;
  if (yaml && (base.starts_with("docker-compose") || base.starts_with("compose."))) {
    return ArtifactKind::kCompose;
  }
  const bool spring_name = base.starts_with("application") || base.starts_with("bootstrap");
  if (yaml && spring_name) return ArtifactKind::kSpringYaml;
  if (has_ext(".properties")) {
    return spring_name ? ArtifactKind::kSpringProperties : ArtifactKind::kProperties;
  }
  return std::nullopt;
}

Technology technology_of(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::kSpringYaml:
    case ArtifactKind::kSpringProperties: return Technology::Kind::kSpring;
    case ArtifactKind::kProperties: return Technology::Kind::kProperties;
    case ArtifactKind::kDockerfile: return Technology::Kind::kDocker;
    case ArtifactKind::kCompose: return Technology::Kind::kDockerCompose;
    case ArtifactKind::kPom: return Technology::Kind::kMaven;
  }
  return Technology::Kind::kOther;
}

std::vector<ConfigOption> parse_artifact(std::string_view project, std::string_view file_path,
                                         std::string_view content) {
  const auto kind = detect_artifact_kind(file_path);
  if (!kind) {
    throw Error(ErrorCode::kUnsupportedFormat, "unsupported artifact: " + std::string(file_path));
  }

  if (!util::valid_utf8(content)) {
    throw Error(ErrorCode::kMalformedArtifact, "content is not valid UTF-8: " + std::string(file_path));
  }

  std::vector<detail::RawOption> raw;
  switch (*kind) {
    case ArtifactKind::kSpringYaml:
    case ArtifactKind::kCompose: raw = detail::parse_yaml(content); break;
    case ArtifactKind::kSpringProperties:
    case ArtifactKind::kProperties: raw = detail::parse_properties(content); break;
    case ArtifactKind::kDockerfile: raw = detail::parse_dockerfile(content); break;
    case ArtifactKind::kPom: raw = detail::parse_pom(content); break;
  }

  const Technology tech = technology_of(*kind);
  std::vector<ConfigOption> out;
  out.reserve(raw.size());
  for (auto& r : raw) {
    if (r.name.empty()) continue;
    out.push_back(make_option(std::string(project), std::string(file_path), tech, std::move(r.name),
                              std::move(r.value), std::max(1, r.line)));
  }
  return out;
}

namespace {

bool skipped_directory(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.starts_with(".") || name == "target" || name == "build" || name == "node_modules";
}

}  // namespace

ExtractResult extract_project(const fs::path& root, const std::string& project) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kMissingPath, "project root is not a directory: " + root.string());
  }

  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && skipped_directory(it->path())) {
      it.disable_recursion_pending();
      continue;
    }
    if (!detect_artifact_kind(it->path().filename().string())) continue;
    // Broken links are kept so they surface as read failures.
    if (it->is_regular_file() || (it->is_symlink() && !fs::exists(it->path()))) {
      files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end());

  ExtractResult result;
  for (const auto& file : files) {
    const std::string rel = file.lexically_relative(root).generic_string();
    std::ifstream in(file, std::ios::binary);
    if (!fs::exists(file) || !in) {
      result.failures.push_back({rel, "cannot open file"});
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      auto options = parse_artifact(project, rel, buf.str());
      result.options.insert(result.options.end(), std::make_move_iterator(options.begin()),
                            std::make_move_iterator(options.end()));
      result.parsed_files.push_back(rel);
    } catch (const Error& e) {
      result.failures.push_back({rel, e.what()});
    }
  }
  return result;
}

}  // namespace cfgrag::confignet

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/corpus/document.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::corpus {

namespace fs = std::filesystem;

std::string_view to_string(SourceKind kind) noexcept {
  switch (kind) {
    case SourceKind::kManual: return "manual";
    case SourceKind::kStackOverflow: return "stackoverflow";
    case SourceKind::kGithubRepo: return "github_repo";
    case SourceKind::kWebSearch: return "web_search";
    case SourceKind::kProjectInfo: return "project_info";
    case SourceKind::kShotExample: return "shot_example";
  }
  return "manual";
}

SourceKind parse_source_kind(std::string_view name) {
  for (auto k : {SourceKind::kManual, SourceKind::kStackOverflow, SourceKind::kGithubRepo, SourceKind::kWebSearch,
                 SourceKind::kProjectInfo, SourceKind::kShotExample}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown source_kind '" + std::string(name) + "'");
}

CorpusManifest CorpusManifest::parse(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kConfigError, "corpus manifest: " + e.msg, e.mark.line + 1);
  }
  if (!root.IsMap() || !root["sources"] || !root["sources"].IsSequence()) {
    throw Error(ErrorCode::kConfigError, "corpus manifest needs a 'sources' list");
  }
  CorpusManifest m;
  for (const auto& node : root["sources"]) {
    const int line = node.Mark().line + 1;
    if (!node.IsMap()) throw Error(ErrorCode::kConfigError, "manifest entry must be a map", line);
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (key != "key" && key != "path" && key != "source_kind" && key != "technology") {
        throw Error(ErrorCode::kConfigError, "unknown manifest key '" + key + "'", line);
      }
    }
    if (!node["key"] || !node["path"] || !node["source_kind"]) {
      throw Error(ErrorCode::kConfigError, "manifest entry needs key, path and source_kind", line);
    }
    ManifestEntry e;
    e.key = node["key"].as<std::string>();
    e.path = node["path"].as<std::string>();
    try {
      e.source_kind = parse_source_kind(node["source_kind"].as<std::string>());
    } catch (const Error& err) {
      throw Error(ErrorCode::kConfigError, err.what(), line);
    }
    if (node["technology"] && !node["technology"].IsNull()) e.technology = node["technology"].as<std::string>();
    m.entries.push_back(std::move(e));
  }
  return m;
}

CorpusManifest CorpusManifest::load(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kMissingPath, "corpus manifest not found: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// First markdown heading, else the file stem.
std::string title_of(const fs::path& p, std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = util::trim(text.substr(pos, nl - pos));
    if (!line.empty()) {
      if (line.starts_with("# ")) return std::string(util::trim(line.substr(2)));
      break;
    }
    pos = nl + 1;
  }
  return p.stem().string();
}

}  // namespace

LoadResult load_corpus(const fs::path& root, const CorpusManifest& manifest) {
  LoadResult result;
  std::set<std::string> seen;
  for (const auto& entry : manifest.entries) {
    const fs::path base = root / entry.path;
    if (!fs::exists(base)) throw Error(ErrorCode::kMissingPath, "corpus path not found: " + base.string());

    std::vector<std::pair<fs::path, std::string>> files;  // (absolute, relative id part)
    if (fs::is_directory(base)) {
      for (const auto& de : fs::recursive_directory_iterator(base)) {
        if (de.is_regular_file()) files.emplace_back(de.path(), de.path().lexically_relative(base).generic_string());
      }
    } else {
      files.emplace_back(base, base.filename().string());
    }
    std::sort(files.begin(), files.end());

    for (const auto& [path, rel] : files) {
      Document doc;
      doc.doc_id = entry.key + "/" + rel;
      if (!seen.insert(doc.doc_id).second) {
        throw Error(ErrorCode::kDuplicateId, "duplicate doc_id '" + doc.doc_id + "'");
      }
      doc.text = read_file(path);
      if (util::trim(doc.text).empty()) {
        ++result.skipped_empty;
        continue;
      }
      doc.source_kind = entry.source_kind;
      doc.technology = entry.technology;
      doc.origin = (fs::path(entry.path) / rel).generic_string();
      doc.title = title_of(path, doc.text);
      doc.fetched_at = std::chrono::time_point_cast<std::chrono::system_clock::duration>(
          fs::last_write_time(path) - fs::file_time_type::clock::now() + std::chrono::system_clock::now());
      result.documents.push_back(std::move(doc));
    }
  }
  std::sort(result.documents.begin(), result.documents.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  return result;
}

}  // namespace cfgrag::corpus

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include <yaml-cpp/yaml.h>

#include <string>

#include "cfgrag/error.hpp"
#include "parsers.hpp"

namespace cfgrag::confignet::detail {

namespace {

void flatten(const YAML::Node& node, const std::string& path, std::vector<RawOption>& out) {
  switch (node.Type()) {
    case YAML::NodeType::Scalar:
      if (!path.empty()) out.push_back({path, node.Scalar(), node.Mark().line + 1});
      break;
    case YAML::NodeType::Sequence: {
      std::size_t index = 0;
      for (const auto& item : node) {
        flatten(item, path + "[" + std::to_string(index++) + "]", out);
      }
      break;
    }
    case YAML::NodeType::Map:
      for (const auto& kv : node) {
        if (!kv.first.IsScalar()) continue;
        const std::string key = sanitize_name(kv.first.Scalar());
        flatten(kv.second, path.empty() ? key : path + "." + key, out);
      }
      break;
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: break;
  }
}

}  // namespace

std::vector<RawOption> parse_yaml(std::string_view content) {
  std::vector<YAML::Node> documents;
  try {
    documents = YAML::LoadAll(std::string(content));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kMalformedArtifact, e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 1);
  }
  std::vector<RawOption> out;
  for (const auto& doc : documents) flatten(doc, "", out);
  return out;
}

}  // namespace cfgrag::confignet::detail

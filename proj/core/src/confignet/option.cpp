// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/confignet/option.hpp"

#include <utility>

#include "cfgrag/confignet/normalize.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::confignet {

Technology Technology::other(std::string label) {
  Technology t(Kind::kOther);
  t.label_ = std::move(label);
  return t;
}

Technology Technology::parse(std::string_view name) {
  const std::string lower = util::to_lower(util::trim(name));
  if (lower == "spring" || lower == "spring-boot") return Kind::kSpring;
  if (lower == "docker" || lower == "dockerfile") return Kind::kDocker;
  if (lower == "docker-compose" || lower == "compose") return Kind::kDockerCompose;
  if (lower == "maven") return Kind::kMaven;
  if (lower == "properties") return Kind::kProperties;
  return other(lower);
}

std::string Technology::name() const {
  switch (kind_) {
    case Kind::kSpring: return "spring";
    case Kind::kDocker: return "docker";
    case Kind::kDockerCompose: return "docker-compose";
    case Kind::kMaven: return "maven";
    case Kind::kProperties: return "properties";
    case Kind::kOther: return label_.empty() ? "other" : label_;
  }
  return "other";
}

std::string_view to_string(ValueKind kind) noexcept {
  switch (kind) {
    case ValueKind::kNumber: return "number";
    case ValueKind::kBoolean: return "boolean";
    case ValueKind::kString: return "string";
    case ValueKind::kSize: return "size";
    case ValueKind::kDuration: return "duration";
    case ValueKind::kPort: return "port";
    case ValueKind::kPath: return "path";
    case ValueKind::kUrl: return "url";
  }
  return "string";
}

ConfigOption make_option(std::string project, std::string file_path, Technology technology,
                         std::string name, std::string raw_value, int line) {
  ConfigOption opt;
  opt.normalized = normalize_value(raw_value, name);
  opt.project = std::move(project);
  opt.file_path = std::move(file_path);
  opt.technology = std::move(technology);
  opt.name = std::move(name);
  opt.raw_value = std::move(raw_value);
  opt.line = line;
  return opt;
}

std::string candidate_id(std::string_view project, const ConfigOption& a, const ConfigOption& b) {
  std::string ca = a.coordinate();
  std::string cb = b.coordinate();
  if (cb < ca) std::swap(ca, cb);
  std::string key(project);
  key.push_back('\n');
  key += ca;
  key.push_back('\n');
  key += cb;
  return util::sha256_hex(key).substr(0, 16);
}

DependencyCandidate make_candidate(ConfigOption a, ConfigOption b) {
  if (b.coordinate() < a.coordinate()) std::swap(a, b);
  DependencyCandidate c;
  c.id = candidate_id(a.project, a, b);
  c.is_cross_technology = !(a.technology == b.technology);
  c.option_a = std::move(a);
  c.option_b = std::move(b);
  return c;
}

}  // namespace cfgrag::confignet

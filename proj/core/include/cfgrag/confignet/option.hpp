// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace cfgrag::confignet {

/// Technology a configuration artifact belongs to. `other` carries a free-form
/// label for technologies outside the built-in parser set.
class Technology {
 public:
  enum class Kind { kSpring, kDocker, kDockerCompose, kMaven, kProperties, kOther };

  Technology() = default;
  Technology(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)
  static Technology other(std::string label);
  static Technology parse(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;

  friend bool operator==(const Technology& a, const Technology& b) {
    return a.kind_ == b.kind_ && a.label_ == b.label_;
  }

 private:
  Kind kind_ = Kind::kOther;
  std::string label_;
};

enum class ValueKind { kNumber, kBoolean, kString, kSize, kDuration, kPort, kPath, kUrl };

std::string_view to_string(ValueKind kind) noexcept;

struct NormalizedValue {
  ValueKind kind = ValueKind::kString;
  std::string canonical;

  friend bool operator==(const NormalizedValue&, const NormalizedValue&) = default;
  friend auto operator<=>(const NormalizedValue&, const NormalizedValue&) = default;
};

struct ConfigOption {
  std::string project;
  std::string file_path;  // relative to the project root, '/'-separated
  Technology technology;
  std::string name;
  std::string raw_value;
  NormalizedValue normalized;
  int line = 1;

  /// "file_path:name", the option's coordinate within a project.
  std::string coordinate() const { return file_path + ":" + name; }

  friend bool operator==(const ConfigOption&, const ConfigOption&) = default;
};

/// Builds an option and fills `normalized` from raw_value and name.
ConfigOption make_option(std::string project, std::string file_path, Technology technology,
                         std::string name, std::string raw_value, int line);

enum class Detection { kValueEquality };

struct DependencyCandidate {
  std::string id;
  ConfigOption option_a;
  ConfigOption option_b;
  Detection detection = Detection::kValueEquality;
  bool is_cross_technology = false;
};

/// Stable, order-independent id for a pair of options of one project.
std::string candidate_id(std::string_view project, const ConfigOption& a, const ConfigOption& b);

/// Canonical candidate: option_a is the option with the smaller coordinate.
DependencyCandidate make_candidate(ConfigOption a, ConfigOption b);

}  // namespace cfgrag::confignet

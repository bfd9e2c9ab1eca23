// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cfgrag/confignet/option.hpp"

namespace cfgrag::testing {

/// tests/data in the source tree.
std::filesystem::path data_dir();

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "cfgrag");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& content);

/// The single candidate extracted from tests/data/port_project.
confignet::DependencyCandidate port_candidate();

/// Run config for the golden mock benchmark: the four studied models on the
/// mock provider, hash embedders, fixture search, all five conditions.
/// Stores and outputs go under `work`.
std::string golden_config(const std::filesystem::path& work, const std::string& run_id = "golden");

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args);

/// Set CFGRAG_UPDATE_GOLDENS=1 to rewrite golden files instead of comparing.
bool update_goldens();

}  // namespace cfgrag::testing

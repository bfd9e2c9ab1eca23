// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfgrag::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIngest = 3,
  kExitProvider = 4,
};

/// Runs the `cfgrag` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfgrag::cli

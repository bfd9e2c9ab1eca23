// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "cfgrag/confignet/option.hpp"

namespace cfgrag::confignet {

/// True when an option name denotes a network port ("server.port",
/// "SERVER_PORT", "services.web.ports[0]", "EXPOSE").
bool is_port_context(std::string_view name);

/// Classifies and canonicalizes a raw option value. Total: every input maps to
/// some kind. Classification order: boolean, number (port when the name
/// context says so), size, duration, url, path, string.
///
/// Sizes are canonicalized to bytes (k/m/g are binary multiples), durations
/// to milliseconds.
NormalizedValue normalize_value(std::string_view raw, std::string_view name_context = {});

}  // namespace cfgrag::confignet

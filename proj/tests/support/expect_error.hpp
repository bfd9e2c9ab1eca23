// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gtest/gtest.h>

#include <functional>

#include "cfgrag/error.hpp"

namespace cfgrag::testing {

/// Code of the cfgrag::Error thrown by `f`; records a failure if none is.
inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no cfgrag::Error thrown";
  return ErrorCode::kInvalidArgument;
}

}  // namespace cfgrag::testing

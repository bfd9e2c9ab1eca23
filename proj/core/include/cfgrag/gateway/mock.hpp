// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <string>
#include <string_view>

#include "cfgrag/net/http.hpp"

namespace cfgrag::gateway {

/// Option pair read from a prompt's "[dependency] ... [/dependency]" block.
struct DependencyBlock {
  std::string tech_a, file_a, name_a, value_a;
  std::string tech_b, file_b, name_b, value_b;
};

/// Throws kMalformedPrompt when the block or one of its name/value lines is
/// missing.
DependencyBlock parse_dependency_block(std::string_view prompt);

/// Offline stand-in model. Predicts a dependency when the normalized values
/// are equal and either the option names share a lower-cased sub-token or one
/// name is EXPOSE and the other contains "port". Answers with the four-field
/// JSON verdict, uncertainty 10 for a dependency and 9 otherwise.
std::string mock_complete(std::string_view prompt);

/// Speaks the chat-completions wire format and answers with mock_complete
/// over the concatenated message contents. Rejects bodies whose temperature
/// is not 0 with status 400.
class MockTransport final : public net::HttpTransport {
 public:
  net::HttpResponse send(const net::HttpRequest& request) override;
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  std::atomic<std::size_t> calls_{0};
};

}  // namespace cfgrag::gateway

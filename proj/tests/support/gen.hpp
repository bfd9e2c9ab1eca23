// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cfgrag::testing {

/// Seeded generator for property tests. Every test fixes its own seed so a
/// failure reproduces exactly.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[size(0, xs.size() - 1)];
  }

  /// Word from a small vocabulary so texts share terms and produce ties.
  std::string word() { return pick(vocabulary()); }

  std::string text(std::size_t min_words, std::size_t max_words) {
    std::string out;
    const auto n = size(min_words, max_words);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out.push_back(' ');
      out += word();
    }
    return out;
  }

  std::string bytes(std::size_t max_len) {
    std::string out(size(0, max_len), '\0');
    for (auto& c : out) c = static_cast<char>(integer(0, 255));
    return out;
  }

  /// Bytes biased toward JSON punctuation and verdict field names.
  std::string json_ish(std::size_t max_pieces) {
    static const std::vector<std::string> pieces = {
        "{", "}", "[", "]", "\"", ":", ",", " ", "\\", "\"plan\"", "\"rationale\"", "\"uncertainty\"",
        "\"isDependency\"", "true", "false", "null", "7", "-1", "11", "\"7\"", "1e3", "\"x\"", "\n", "\x01", "\xff"};
    std::string out;
    const auto n = size(0, max_pieces);
    for (std::size_t i = 0; i < n; ++i) out += pick(pieces);
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  static const std::vector<std::string>& vocabulary() {
    static const std::vector<std::string> v = {
        "server",  "port",   "8080",   "docker", "expose", "spring", "maven",    "pom",     "version", "image",
        "compose", "volume", "env",    "java",   "jar",    "build",  "profile",  "timeout", "pool",    "database",
        "user",    "secret", "health", "check",  "app",    "name",   "artifact", "network", "host",    "path"};
    return v;
  }

  std::mt19937_64 rng_;
};

}  // namespace cfgrag::testing

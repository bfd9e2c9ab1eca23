// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/confignet/normalize.hpp"

#include <fmt/format.h>

#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <string>

#include "cfgrag/util/text.hpp"

namespace cfgrag::confignet {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view strip_quotes(std::string_view v) {
  for (;;) {
    v = util::trim(v);
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
      v = v.substr(1, v.size() - 2);
      continue;
    }
    return v;
  }
}

/// Splits "[+-]digits[.digits]" into sign, integer and fraction digits.
struct Decimal {
  bool negative = false;
  std::string_view integer;
  std::string_view fraction;
  bool has_fraction = false;
};

std::optional<Decimal> parse_decimal(std::string_view s) {
  Decimal d;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    d.negative = s[i] == '-';
    ++i;
  }
  const std::size_t int_begin = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  if (i == int_begin) return std::nullopt;
  d.integer = s.substr(int_begin, i - int_begin);
  if (i < s.size() && s[i] == '.') {
    ++i;
    const std::size_t frac_begin = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i == frac_begin) return std::nullopt;
    d.fraction = s.substr(frac_begin, i - frac_begin);
    d.has_fraction = true;
  }
  if (i != s.size()) return std::nullopt;
  return d;
}

std::string canonical_decimal(const Decimal& d) {
  std::string_view integer = d.integer;
  while (integer.size() > 1 && integer.front() == '0') integer.remove_prefix(1);
  std::string_view fraction = d.fraction;
  while (!fraction.empty() && fraction.back() == '0') fraction.remove_suffix(1);
  std::string out;
  const bool zero = integer == "0" && fraction.empty();
  if (d.negative && !zero) out.push_back('-');
  out.append(integer);
  if (!fraction.empty()) {
    out.push_back('.');
    out.append(fraction);
  }
  return out;
}

struct Unit {
  std::string_view suffix;
  ValueKind kind;
  long double factor;
};

// Longest suffixes first so "ms" wins over "s" and "kb" over "b".
constexpr std::array<Unit, 16> kUnits{{
    {"kib", ValueKind::kSize, 1024.0L},
    {"mib", ValueKind::kSize, 1024.0L * 1024},
    {"gib", ValueKind::kSize, 1024.0L * 1024 * 1024},
    {"min", ValueKind::kDuration, 60'000.0L},
    {"kb", ValueKind::kSize, 1024.0L},
    {"mb", ValueKind::kSize, 1024.0L * 1024},
    {"gb", ValueKind::kSize, 1024.0L * 1024 * 1024},
    {"tb", ValueKind::kSize, 1024.0L * 1024 * 1024 * 1024},
    {"ms", ValueKind::kDuration, 1.0L},
    {"k", ValueKind::kSize, 1024.0L},
    {"m", ValueKind::kSize, 1024.0L * 1024},
    {"g", ValueKind::kSize, 1024.0L * 1024 * 1024},
    {"t", ValueKind::kSize, 1024.0L * 1024 * 1024 * 1024},
    {"b", ValueKind::kSize, 1.0L},
    {"s", ValueKind::kDuration, 1000.0L},
    {"h", ValueKind::kDuration, 3'600'000.0L},
}};

std::optional<NormalizedValue> parse_quantity(std::string_view lower) {
  for (const Unit& unit : kUnits) {
    if (lower.size() <= unit.suffix.size() || !lower.ends_with(unit.suffix)) continue;
    const std::string_view number = util::trim(lower.substr(0, lower.size() - unit.suffix.size()));
    auto dec = parse_decimal(number);
    if (!dec || dec->negative) continue;
    const long double value = std::stold(std::string(number)) * unit.factor;
    return NormalizedValue{unit.kind, fmt::format("{:.0f}", static_cast<double>(std::round(value)))};
  }
  return std::nullopt;
}

bool is_url(std::string_view s) {
  const auto pos = s.find("://");
  if (pos == std::string_view::npos || pos == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < pos; ++i) {
    const char c = s[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  return true;
}

}  // namespace

bool is_port_context(std::string_view name) {
  for (const auto& token : util::name_subtokens(name)) {
    if (token == "port" || token == "ports" || token == "expose") return true;
  }
  return false;
}

NormalizedValue normalize_value(std::string_view raw, std::string_view name_context) {
  const std::string_view value = strip_quotes(raw);
  const std::string lower = util::to_lower(value);

  if (lower == "true" || lower == "yes" || lower == "on") return {ValueKind::kBoolean, "true"};
  if (lower == "false" || lower == "no" || lower == "off") return {ValueKind::kBoolean, "false"};

  if (auto dec = parse_decimal(lower)) {
    std::string canonical = canonical_decimal(*dec);
    if (!dec->has_fraction && !dec->negative && is_port_context(name_context) &&
        canonical.size() <= 5) {
      const int port = std::stoi(canonical);
      if (port >= 1 && port <= 65535) return {ValueKind::kPort, std::move(canonical)};
    }
    return {ValueKind::kNumber, std::move(canonical)};
  }

  if (auto quantity = parse_quantity(lower)) return *quantity;

  if (is_url(lower)) {
    std::string url = lower;
    while (url.size() > 1 && url.back() == '/' && !url.ends_with("://")) url.pop_back();
    return {ValueKind::kUrl, std::move(url)};
  }

  if (lower.find('/') != std::string::npos || lower.starts_with('.')) {
    std::string path = lower;
    while (path.size() > 1 && path.back() == '/') path.pop_back();
    return {ValueKind::kPath, std::move(path)};
  }

  return {ValueKind::kString, lower};
}

}  // namespace cfgrag::confignet

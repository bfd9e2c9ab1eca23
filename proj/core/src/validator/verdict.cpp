// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/validator/verdict.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <optional>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::validator {

using nlohmann::json;

namespace {

constexpr int kMaxRepairCandidates = 64;

std::optional<int> strict_uncertainty(const json& v) {
  if (!v.is_number_integer()) return std::nullopt;
  const auto x = v.get<std::int64_t>();
  if (x < 0 || x > 10) return std::nullopt;
  return static_cast<int>(x);
}

std::optional<int> lenient_uncertainty(const json& v) {
  if (auto s = strict_uncertainty(v)) return s;
  double x = 0.0;
  if (v.is_number_float()) {
    x = v.get<double>();
  } else if (v.is_string()) {
    const auto s = util::trim(v.get_ref<const std::string&>());
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (!std::isfinite(x) || x != std::floor(x) || x < 0.0 || x > 10.0) return std::nullopt;
  return static_cast<int>(x);
}

std::optional<bool> lenient_bool(const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (util::iequals(util::trim(s), "true")) return true;
    if (util::iequals(util::trim(s), "false")) return false;
  }
  return std::nullopt;
}

std::optional<Verdict> from_object(const json& j, bool lenient) {
  if (!j.is_object()) return std::nullopt;
  const auto plan = j.find("plan");
  const auto rationale = j.find("rationale");
  const auto unc = j.find("uncertainty");
  const auto dep = j.find("isDependency");
  if (plan == j.end() || rationale == j.end() || unc == j.end() || dep == j.end()) return std::nullopt;
  if (!plan->is_string() || !rationale->is_string()) return std::nullopt;

  Verdict v;
  v.plan = plan->get<std::string>();
  v.rationale = rationale->get<std::string>();
  const auto u = lenient ? lenient_uncertainty(*unc) : strict_uncertainty(*unc);
  const auto d = lenient ? lenient_bool(*dep) : (dep->is_boolean() ? std::optional<bool>(dep->get<bool>()) : std::nullopt);
  if (!u || !d) return std::nullopt;
  v.uncertainty = *u;
  v.is_dependency = *d;
  v.parse_status = lenient ? ParseStatus::kRepaired : ParseStatus::kOk;
  return v;
}

// End of the balanced object starting at `open`, skipping braces inside
// JSON strings.
std::optional<std::size_t> balanced_end(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ParseStatus s) noexcept {
  switch (s) {
    case ParseStatus::kOk: return "ok";
    case ParseStatus::kRepaired: return "repaired";
    case ParseStatus::kDefaulted: return "defaulted";
  }
  return "defaulted";
}

ParseStatus parse_parse_status(std::string_view name) {
  if (name == "ok") return ParseStatus::kOk;
  if (name == "repaired") return ParseStatus::kRepaired;
  if (name == "defaulted") return ParseStatus::kDefaulted;
  throw Error(ErrorCode::kInvalidArgument, "unknown parse status " + std::string(name));
}

Verdict parse_verdict(std::string_view text) {
  const auto whole = json::parse(text, nullptr, false);
  if (!whole.is_discarded()) {
    if (auto v = from_object(whole, false)) return *v;
    if (auto v = from_object(whole, true)) return *v;
  }

  int attempts = 0;
  for (std::size_t open = text.find('{'); open != std::string_view::npos && attempts < kMaxRepairCandidates;
       open = text.find('{', open + 1)) {
    ++attempts;
    const auto close = balanced_end(text, open);
    if (!close) continue;
    const auto j = json::parse(text.substr(open, *close - open + 1), nullptr, false);
    if (j.is_discarded()) continue;
    if (auto v = from_object(j, true)) return *v;
  }
  return Verdict{};
}

}  // namespace cfgrag::validator

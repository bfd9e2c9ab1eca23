// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <set>
#include <span>
#include <string>

#include "cfgrag/validator/pipeline.hpp"

namespace cfgrag::eval {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::size_t defaulted = 0;  // records whose prediction came from a defaulted verdict

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Label per candidate id.
using LabelMap = std::map<std::string, bool, std::less<>>;

/// kMissingLabel when a record's candidate has no label.
ConfusionMatrix compute_confusion(std::span<const validator::ValidationRecord> records, const LabelMap& labels);

enum class MetricFlag { kNoPositivePredictions, kNoPositiveLabels };

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_failures = 0;  // fp + fn
  std::set<MetricFlag> flags;
};

/// Zero denominators give 0 with a flag. kEmptyMatrix on an all-zero matrix.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

/// Harmonic mean; 0 when p + r is 0.
double f1_score(double precision, double recall) noexcept;

/// Whether a record is a wrong validation under `label`.
inline bool is_failure(const validator::ValidationRecord& r, bool label) noexcept {
  return r.verdict.is_dependency != label;
}

}  // namespace cfgrag::eval

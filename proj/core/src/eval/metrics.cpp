// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/eval/metrics.hpp"

#include "cfgrag/error.hpp"

namespace cfgrag::eval {

ConfusionMatrix compute_confusion(std::span<const validator::ValidationRecord> records, const LabelMap& labels) {
  ConfusionMatrix cm;
  for (const auto& r : records) {
    const auto it = labels.find(r.candidate_id);
    if (it == labels.end()) throw Error(ErrorCode::kMissingLabel, "no label for candidate " + r.candidate_id);
    const bool predicted = r.verdict.is_dependency;
    const bool actual = it->second;
    if (predicted && actual) ++cm.tp;
    else if (predicted) ++cm.fp;
    else if (actual) ++cm.fn;
    else ++cm.tn;
    if (r.verdict.parse_status == validator::ParseStatus::kDefaulted) ++cm.defaulted;
  }
  return cm;
}

double f1_score(double precision, double recall) noexcept {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::kEmptyMatrix, "confusion matrix has no records");
  MetricsReport m;
  const auto tp = static_cast<double>(cm.tp);
  if (cm.tp + cm.fp == 0) m.flags.insert(MetricFlag::kNoPositivePredictions);
  else m.precision = tp / static_cast<double>(cm.tp + cm.fp);
  if (cm.tp + cm.fn == 0) m.flags.insert(MetricFlag::kNoPositiveLabels);
  else m.recall = tp / static_cast<double>(cm.tp + cm.fn);
  m.f1 = f1_score(m.precision, m.recall);
  m.n_failures = cm.fp + cm.fn;
  return m;
}

}  // namespace cfgrag::eval

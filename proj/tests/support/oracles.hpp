// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force reference implementations used as test oracles. They share
// only data types and the text analyzer with the library.

#pragma once

#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cfgrag/confignet/detect.hpp"
#include "cfgrag/corpus/chunk.hpp"
#include "cfgrag/corpus/embedding.hpp"
#include "cfgrag/retrieval/query.hpp"
#include "cfgrag/validator/prompt.hpp"

namespace cfgrag::testing {

/// Sliding windows by direct enumeration: start at 0, step size-overlap,
/// stop once a window reaches the end.
std::vector<std::pair<std::size_t, std::size_t>> oracle_windows(std::size_t tokens, std::size_t size,
                                                                std::size_t overlap);

double oracle_cosine(const std::vector<float>& a, const std::vector<float>& b);

double oracle_bm25(const std::vector<corpus::Chunk>& chunks, const std::vector<std::string>& query_terms,
                   const std::string& chunk_id, double k1 = 1.2, double b = 0.75);

struct OracleHit {
  std::string chunk_id;
  double fused = 0.0;
  int dense_rank = 0;   // 0 = absent
  int sparse_rank = 0;  // 0 = absent
};

/// Scores every chunk on both legs, keeps the top k of each (score desc, id
/// asc; sparse keeps only positive scores), fuses with RRF and sorts by fused
/// score desc, id asc.
std::vector<OracleHit> oracle_hybrid_rrf(const std::vector<corpus::Chunk>& chunks,
                                         const retrieval::RetrievalQuery& query,
                                         const corpus::EmbeddingProvider& provider, std::size_t k_dense,
                                         std::size_t k_sparse, double k_rrf);

double oracle_maxsim(const std::vector<std::vector<float>>& q, const std::vector<std::vector<float>>& d);

/// Full scan: drop the candidate's own id, sort everything by cosine desc,
/// id asc, take n.
std::vector<std::string> oracle_top_shots(const confignet::DependencyCandidate& candidate,
                                          const std::vector<validator::ShotExample>& pool,
                                          const corpus::EmbeddingProvider& provider, std::size_t n);

/// (id, coordinate a, coordinate b) for every qualifying pair, by O(n^2)
/// comparison of all option pairs.
std::set<std::tuple<std::string, std::string, std::string>> oracle_candidates(
    const std::vector<confignet::ConfigOption>& options, const confignet::ValueStoplist& stoplist);

/// The mock model's decision rule, restated over names and raw values.
bool oracle_mock_rule(const confignet::ConfigOption& a, const confignet::ConfigOption& b);

double oracle_f1(double precision, double recall);

}  // namespace cfgrag::testing

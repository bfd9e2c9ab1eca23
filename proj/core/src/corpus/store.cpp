// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfgrag/corpus/store.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"

namespace cfgrag::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string_view strip_punct(std::string_view t) {
  while (!t.empty() && !is_word_char(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && !is_word_char(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  return t;
}

bool is_separator(char c) { return c == '.' || c == '_' || c == '-'; }

void sort_scored(std::vector<ScoredChunk>& v) {
  std::sort(v.begin(), v.end(), [](const ScoredChunk& a, const ScoredChunk& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.chunk_id < b.chunk_id;
  });
}

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

std::uint64_t get_le(std::istream& is, int bytes) {
  unsigned char b[8] = {};
  is.read(reinterpret_cast<char*>(b), bytes);
  if (!is) throw Error(ErrorCode::kIoError, "embeddings.bin is truncated");
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

json metadata_to_json(const ChunkMetadata& m) {
  json j{{"source_kind", to_string(m.source_kind)}, {"origin", m.origin}};
  j["technology"] = m.technology ? json(*m.technology) : json(nullptr);
  j["title"] = m.title ? json(*m.title) : json(nullptr);
  j["candidate_id"] = m.candidate_id ? json(*m.candidate_id) : json(nullptr);
  return j;
}

std::optional<std::string> opt_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<std::string>();
}

}  // namespace

std::vector<std::string> analyze_terms(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& span : util::whitespace_tokens(text)) {
    const auto term = util::to_lower(strip_punct(text.substr(span.begin, span.end - span.begin)));
    if (term.empty()) continue;
    out.push_back(term);
    if (std::none_of(term.begin(), term.end(), is_separator)) continue;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= term.size(); ++i) {
      if (i == term.size() || is_separator(term[i])) {
        auto piece = strip_punct(std::string_view(term).substr(start, i - start));
        if (!piece.empty()) out.emplace_back(piece);
        start = i + 1;
      }
    }
  }
  return out;
}

std::vector<std::string> analyze_query_terms(std::span<const std::string> keywords) {
  std::set<std::string> terms;
  for (const auto& k : keywords) {
    for (auto& t : analyze_terms(k)) terms.insert(std::move(t));
  }
  return {terms.begin(), terms.end()};
}

HybridStore::HybridStore(std::size_t dimension, Bm25Params params) : dimension_(dimension), params_(params) {
  if (dimension_ == 0) throw Error(ErrorCode::kInvalidArgument, "store dimension must be positive");
}

HybridStore::HybridStore(HybridStore&& other) noexcept
    : dimension_(other.dimension_),
      params_(other.params_),
      chunk_table_(std::move(other.chunk_table_)),
      dense_(std::move(other.dense_)),
      postings_(std::move(other.postings_)),
      doc_length_(std::move(other.doc_length_)),
      total_length_(std::exchange(other.total_length_, 0)) {}

std::size_t HybridStore::size() const {
  std::shared_lock lock(mu_);
  return chunk_table_.size();
}

void HybridStore::index_terms_locked(const std::string& chunk_id, const std::string& text) {
  const auto terms = analyze_terms(text);
  for (const auto& t : terms) ++postings_[t][chunk_id];
  doc_length_[chunk_id] = terms.size();
  total_length_ += terms.size();
}

void HybridStore::unindex_locked(const std::string& chunk_id) {
  const auto it = chunk_table_.find(chunk_id);
  if (it == chunk_table_.end()) return;
  std::set<std::string> terms;
  for (auto& t : analyze_terms(it->second.text)) terms.insert(std::move(t));
  for (const auto& t : terms) {
    auto p = postings_.find(t);
    if (p == postings_.end()) continue;
    p->second.erase(chunk_id);
    if (p->second.empty()) postings_.erase(p);
  }
  total_length_ -= doc_length_[chunk_id];
  doc_length_.erase(chunk_id);
  dense_.erase(chunk_id);
  chunk_table_.erase(it);
}

UpsertStats HybridStore::upsert(std::vector<Chunk> chunks) {
  for (const auto& c : chunks) {
    if (c.embedding.size() != dimension_) {
      throw Error(ErrorCode::kDimensionMismatch, fmt::format("chunk {} has dimension {}, store expects {}",
                                                             c.chunk_id, c.embedding.size(), dimension_));
    }
    if (c.chunk_id.empty()) throw Error(ErrorCode::kInvalidArgument, "chunk without an id");
  }
  UpsertStats stats;
  std::unique_lock lock(mu_);
  for (auto& c : chunks) {
    if (chunk_table_.count(c.chunk_id)) {
      unindex_locked(c.chunk_id);
      ++stats.replaced;
    } else {
      ++stats.inserted;
    }
    index_terms_locked(c.chunk_id, c.text);
    dense_[c.chunk_id] = std::move(c.embedding);
    c.embedding.clear();
    const auto id = c.chunk_id;
    chunk_table_.emplace(id, std::move(c));
  }
  return stats;
}

std::size_t HybridStore::purge_candidate(const std::string& candidate_id) {
  std::unique_lock lock(mu_);
  std::vector<std::string> doomed;
  for (const auto& [id, c] : chunk_table_) {
    if (c.metadata.candidate_id && *c.metadata.candidate_id == candidate_id) doomed.push_back(id);
  }
  for (const auto& id : doomed) unindex_locked(id);
  return doomed.size();
}

std::optional<Chunk> HybridStore::get(const std::string& chunk_id) const {
  std::shared_lock lock(mu_);
  const auto it = chunk_table_.find(chunk_id);
  if (it == chunk_table_.end()) return std::nullopt;
  Chunk c = it->second;
  c.embedding = dense_.at(chunk_id);
  return c;
}

std::vector<std::string> HybridStore::chunk_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  out.reserve(chunk_table_.size());
  for (const auto& [id, _] : chunk_table_) out.push_back(id);
  return out;
}

std::vector<Chunk> HybridStore::snapshot() const {
  std::shared_lock lock(mu_);
  std::vector<Chunk> out;
  out.reserve(chunk_table_.size());
  for (const auto& [id, c] : chunk_table_) {
    out.push_back(c);
    out.back().embedding = dense_.at(id);
  }
  return out;
}

double HybridStore::bm25_locked(std::span<const std::string> query_terms, const std::string& chunk_id) const {
  const double n = static_cast<double>(doc_length_.size());
  const double avgdl = static_cast<double>(total_length_) / n;
  const double dl = static_cast<double>(doc_length_.at(chunk_id));
  double score = 0.0;
  for (const auto& term : query_terms) {
    const auto p = postings_.find(term);
    if (p == postings_.end()) continue;
    const auto tf_it = p->second.find(chunk_id);
    if (tf_it == p->second.end()) continue;
    const double df = static_cast<double>(p->second.size());
    const double tf = tf_it->second;
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    const double norm = avgdl > 0.0 ? dl / avgdl : 0.0;
    score += idf * tf * (params_.k1 + 1.0) / (tf + params_.k1 * (1.0 - params_.b + params_.b * norm));
  }
  return score;
}

double HybridStore::bm25_score(std::span<const std::string> query_terms, const std::string& chunk_id) const {
  std::shared_lock lock(mu_);
  if (!chunk_table_.count(chunk_id)) throw Error(ErrorCode::kUnknownChunk, "no chunk " + chunk_id);
  return bm25_locked(query_terms, chunk_id);
}

std::vector<ScoredChunk> HybridStore::dense_search(std::span<const float> query, std::size_t k,
                                                   const ChunkFilter& filter) const {
  if (query.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("query has dimension {}, store expects {}", query.size(), dimension_));
  }
  std::shared_lock lock(mu_);
  std::vector<ScoredChunk> out;
  for (const auto& [id, v] : dense_) {
    if (filter && !filter(chunk_table_.at(id).metadata)) continue;
    out.push_back({id, cosine(query, v)});
  }
  sort_scored(out);
  if (out.size() > k) out.resize(k);
  return out;
}

std::vector<ScoredChunk> HybridStore::sparse_search(std::span<const std::string> query_terms, std::size_t k,
                                                    const ChunkFilter& filter) const {
  std::shared_lock lock(mu_);
  std::set<std::string> hit;
  for (const auto& term : query_terms) {
    const auto p = postings_.find(term);
    if (p == postings_.end()) continue;
    for (const auto& [id, _] : p->second) hit.insert(id);
  }
  std::vector<ScoredChunk> out;
  for (const auto& id : hit) {
    if (filter && !filter(chunk_table_.at(id).metadata)) continue;
    const double s = bm25_locked(query_terms, id);
    if (s > 0.0) out.push_back({id, s});
  }
  sort_scored(out);
  if (out.size() > k) out.resize(k);
  return out;
}

std::size_t HybridStore::document_frequency(const std::string& term) const {
  std::shared_lock lock(mu_);
  const auto p = postings_.find(term);
  return p == postings_.end() ? 0 : p->second.size();
}

double HybridStore::average_length() const {
  std::shared_lock lock(mu_);
  return doc_length_.empty() ? 0.0 : static_cast<double>(total_length_) / static_cast<double>(doc_length_.size());
}

bool HybridStore::consistent() const {
  std::shared_lock lock(mu_);
  if (chunk_table_.size() != dense_.size() || chunk_table_.size() != doc_length_.size()) return false;
  std::size_t total = 0;
  for (const auto& [id, c] : chunk_table_) {
    const auto d = dense_.find(id);
    if (d == dense_.end() || d->second.size() != dimension_) return false;
    const auto l = doc_length_.find(id);
    if (l == doc_length_.end()) return false;
    total += l->second;
  }
  if (total != total_length_) return false;
  for (const auto& [term, docs] : postings_) {
    if (docs.empty()) return false;
    for (const auto& [id, tf] : docs) {
      if (!chunk_table_.count(id) || tf == 0) return false;
    }
  }
  return true;
}

void HybridStore::save(const fs::path& dir) const {
  std::shared_lock lock(mu_);
  fs::create_directories(dir);

  std::ofstream chunks(dir / "chunks.jsonl", std::ios::binary | std::ios::trunc);
  std::ofstream emb(dir / "embeddings.bin", std::ios::binary | std::ios::trunc);
  if (!chunks || !emb) throw Error(ErrorCode::kIoError, "cannot write store under " + dir.string());

  emb.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  put_u32(emb, static_cast<std::uint32_t>(dimension_));
  put_u64(emb, chunk_table_.size());
  for (const auto& [id, c] : chunk_table_) {
    json j{{"chunk_id", id},
           {"doc_id", c.doc_id},
           {"window_index", c.window_index},
           {"token_span", {c.token_begin, c.token_end}},
           {"text", c.text},
           {"metadata", metadata_to_json(c.metadata)}};
    chunks << j.dump() << '\n';
    for (float f : dense_.at(id)) {
      std::uint32_t bits;
      std::memcpy(&bits, &f, sizeof bits);
      put_u32(emb, bits);
    }
  }

  json df = json::object();
  for (const auto& [term, docs] : postings_) df[term] = docs.size();
  const double avgdl =
      doc_length_.empty() ? 0.0 : static_cast<double>(total_length_) / static_cast<double>(doc_length_.size());
  json stats{{"k1", params_.k1},
             {"b", params_.b},
             {"documents", doc_length_.size()},
             {"total_length", total_length_},
             {"avgdl", avgdl},
             {"df", df}};
  std::ofstream bm(dir / "bm25.json", std::ios::binary | std::ios::trunc);
  bm << stats.dump(1) << '\n';
  if (!chunks || !emb || !bm) throw Error(ErrorCode::kIoError, "failed writing store under " + dir.string());
}

HybridStore HybridStore::load(const fs::path& dir) {
  std::ifstream emb(dir / "embeddings.bin", std::ios::binary);
  std::ifstream chunks(dir / "chunks.jsonl", std::ios::binary);
  std::ifstream bm(dir / "bm25.json", std::ios::binary);
  if (!emb || !chunks || !bm) throw Error(ErrorCode::kMissingPath, "no persisted store under " + dir.string());

  std::string magic(kMagic.size(), '\0');
  emb.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!emb || magic != kMagic) throw Error(ErrorCode::kIoError, "embeddings.bin has a bad header");
  const auto dim = static_cast<std::size_t>(get_le(emb, 4));
  const auto rows = get_le(emb, 8);

  const auto stats = json::parse(bm, nullptr, false);
  if (stats.is_discarded()) throw Error(ErrorCode::kIoError, "bm25.json is not valid JSON");
  HybridStore store(dim, Bm25Params{stats.value("k1", 1.2), stats.value("b", 0.75)});

  std::vector<Chunk> batch;
  std::string line;
  while (std::getline(chunks, line)) {
    if (util::trim(line).empty()) continue;
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kIoError, "chunks.jsonl has a malformed line");
    Chunk c;
    c.chunk_id = j.at("chunk_id").get<std::string>();
    c.doc_id = j.at("doc_id").get<std::string>();
    c.window_index = j.at("window_index").get<std::size_t>();
    c.token_begin = j.at("token_span").at(0).get<std::size_t>();
    c.token_end = j.at("token_span").at(1).get<std::size_t>();
    c.text = j.at("text").get<std::string>();
    const auto& m = j.at("metadata");
    c.metadata.source_kind = parse_source_kind(m.at("source_kind").get<std::string>());
    c.metadata.origin = m.value("origin", "");
    c.metadata.technology = opt_string(m, "technology");
    c.metadata.title = opt_string(m, "title");
    c.metadata.candidate_id = opt_string(m, "candidate_id");
    c.embedding.resize(dim);
    for (auto& f : c.embedding) {
      const auto bits = static_cast<std::uint32_t>(get_le(emb, 4));
      std::memcpy(&f, &bits, sizeof f);
    }
    batch.push_back(std::move(c));
  }
  if (batch.size() != rows) {
    throw Error(ErrorCode::kIoError, fmt::format("chunks.jsonl has {} rows, embeddings.bin {}", batch.size(), rows));
  }
  store.upsert(std::move(batch));
  if (stats.value("documents", std::size_t{0}) != store.size()) {
    throw Error(ErrorCode::kIoError, "bm25.json disagrees with chunks.jsonl");
  }
  return store;
}

}  // namespace cfgrag::corpus

// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "cfgrag/confignet/detect.hpp"
#include "cfgrag/confignet/parse.hpp"
#include "cli.hpp"

namespace cfgrag::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return fs::path(CFGRAG_TEST_DATA_DIR); }

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() / (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

confignet::DependencyCandidate port_candidate() {
  const auto extracted = confignet::extract_project(data_dir() / "port_project", "port_project");
  const auto candidates = confignet::detect_candidates(extracted.options);
  if (candidates.size() != 1) throw std::runtime_error("port fixture must yield one candidate");
  return candidates.front();
}

std::string golden_config(const fs::path& work, const std::string& run_id) {
  const auto data = data_dir();
  std::ostringstream y;
  y << "run_id: " << run_id << "\n"
    << "corpus:\n"
    << "  root: " << (data / "corpus").string() << "\n"
    << "  manifest: " << (data / "corpus" / "manifest.yml").string() << "\n"
    << "store_dir: " << (work / "store").string() << "\n"
    << "embedding:\n"
    << "  providers:\n"
    << "    - {id: ada2, dimension: 1536, mode: hash}\n"
    << "    - {id: qwen2, dimension: 3584, mode: hash}\n"
    << "models:\n"
    << "  - {model_id: gpt-4o-2024-05-13, provider: mock}\n"
    << "  - {model_id: gpt-3.5-turbo-0125, provider: mock}\n"
    << "  - {model_id: llama3:70b, provider: mock}\n"
    << "  - {model_id: llama3:8b, provider: mock}\n"
    << "variants: [\"w/o\", \"1\", \"2\", \"3\", \"4\"]\n"
    << "datasets: [" << (data / "golden" / "dataset.jsonl").string() << "]\n"
    << "split: benchmark\n"
    << "output_dir: " << (work / "out").string() << "\n"
    << "concurrency: 4\n"
    << "search:\n"
    << "  mode: fixture\n"
    << "  fixture_dir: " << (data / "search").string() << "\n"
    << "cache:\n"
    << "  enabled: false\n";
  return y.str();
}

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool update_goldens() {
  const char* v = std::getenv("CFGRAG_UPDATE_GOLDENS");
  return v && std::string(v) == "1";
}

}  // namespace cfgrag::testing

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tap/instance.hpp"

namespace tap {

// Experiment configuration (JSON): instance sources, LP models,
// decomposition algorithms, and oracle bounds. All randomness derives from
// the single seed.
struct ExperimentConfig {
  struct Source {
    std::string id;
    std::string kind;  // "file" | "random-binary" | "caterpillar" | "star" | "fig2"
    std::string path;  // kind == file
    int nodes = 8;
    int count = 1;     // generated variants
    long cost_lo = 1, cost_hi = 10;
    int extra_links = 3;
  };
  std::uint64_t seed = 1;
  std::vector<Source> sources;
  std::vector<std::string> models;      // subset of edge/node/odd
  std::vector<std::string> algorithms;  // large-link / greedy / abundant / deficient
  int oracle_max_links = 40;
  long copy_budget = 1000000;
  int threads = 0;
  bool timings = false;  // include wall-clock columns (breaks byte-identical runs)
};

ExperimentConfig experiment_config_from_json(const std::string& text);

struct ExperimentRow {
  std::string instance_id;
  std::string model;
  std::string lp_optimum;
  std::string algorithm;
  std::string certified_factor;
  std::string best_class_cost;
  std::string exact_optimum;   // empty when the oracle was skipped
  std::string observed_ratio;  // best class / exact, when available
  bool verified = false;
  long runtime_ms = -1;  // only with timings enabled
  std::string note;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::string max_ratio_per_algorithm;  // aggregate summary line
  long conjecture_violations = 0;
  bool all_verified = true;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::string report_to_json(const ExperimentReport& r, bool timings);
std::string report_to_table(const ExperimentReport& r, bool timings);

}  // namespace tap

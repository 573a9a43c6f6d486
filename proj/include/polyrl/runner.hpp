#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "polyrl/config.hpp"

namespace polyrl {

struct MetricsRow {
  std::uint64_t seed;
  int episode;
  double train_return;
  double eval_return;
  int steps_to_goal;  // step cap when the goal was not reached
  double coverage;    // cumulative visited-cell fraction
  double greedy_frac;
  long segments;
};

struct SeedResult {
  std::uint64_t seed;
  bool failed = false;
  int failure_episode = -1;
  std::string failure_reason;
  std::vector<MetricsRow> rows;
};

struct ExperimentResult {
  std::vector<SeedResult> seeds;
  std::filesystem::path metrics_path;
};

// Runs the configured experiment for every seed and writes metrics.csv,
// weights_seed<S>.csv and (optionally) trajectory/decision files under
// cfg.output_dir. Outputs are deterministic per (config, seed).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Grid sweep over theta x sigma_sq x beta; one run_experiment per point in
// a subdirectory, plus an aggregated sweep.csv. Failed seeds are recorded
// and do not abort the sweep.
void run_sweep(const ExperimentConfig& cfg);

struct ChainStatsParams {
  std::string model = "frc";  // "fjc" | "frc"
  int dim = 3;
  int n_bonds = 100;
  double b0 = 1.0;
  double theta = 0.2;  // frc only
  long n_chains = 10000;
  std::uint64_t seed = 1;
  int max_lag = -1;  // -1 -> model-appropriate default
};

// Monte Carlo chain-statistics campaign; emits a long-format CSV
// (metric,k,value,stderr,reference) with analytic reference columns.
void run_chain_stats(const ChainStatsParams& params, const std::filesystem::path& out_file);

// Weight snapshots (CSV: index,weight).
void save_weights_csv(const std::filesystem::path& path, const std::vector<double>& w);
std::vector<double> load_weights_csv(const std::filesystem::path& path);

// Greedy-only rollouts with reloaded weights; writes eval.csv
// (episode,return,steps) and returns the mean return.
double run_eval(const ExperimentConfig& cfg, const std::filesystem::path& weights_path,
                int episodes, std::uint64_t seed, const std::filesystem::path& out_file);

}  // namespace polyrl

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "markovgev/inference.hpp"
#include "markovgev/simulate.hpp"

namespace markovgev {

// Simulation-study configuration. Desk-scale defaults (100 replicates,
// 2,000 retained draws per fit) keep a full coverage run in the minutes
// range; the chi table carries its own replicate count because it needs
// no MCMC and is cheap at 400.
struct StudyConfig {
  std::vector<ProcessSpec> processes;  // empty = all three defaults
  int n_replicates = 100;
  int series_length = 100;
  McmcConfig mcmc;  // per-fit settings; seed is derived per replicate
  double ci_level = 0.90;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  int chi_replicates = 400;
  int chi_max_lag = 5;
  std::vector<double> chi_thresholds = {0.90, 0.925, 0.95};

  std::vector<ProcessSpec> effective_processes() const;
  void validate() const;
};

StudyConfig default_study_config();

struct ReplicateRecord {
  int replicate = 0;
  bool failed = false;
  std::string failure;
  double true_q = 0.0;
  // Equal-tailed credible intervals for the conditional next-step quantile.
  double indep_lower = 0.0, indep_upper = 0.0;
  double markov_lower = 0.0, markov_upper = 0.0;
  bool indep_hit = false, markov_hit = false;
};

struct ProcessCoverage {
  ProcessSpec process;
  std::vector<ReplicateRecord> records;
  int n_failed = 0;
  double coverage_indep = 0.0;
  double coverage_markov = 0.0;
  double width_mean_indep = 0.0;
  double width_mean_markov = 0.0;
};

struct CoverageResult {
  StudyConfig config;
  std::vector<ProcessCoverage> by_process;
};

// For every replicate: simulate, record the exact conditional quantile, fit
// the stationary independent (M1) and stationary Markov (M3) models by MCMC,
// and score whether each equal-tailed interval of per-draw conditional
// quantiles covers the truth. Replicates whose sampler fails are excluded
// from the rate and counted. Bit-identical output for a given master seed
// regardless of worker count.
CoverageResult run_coverage_study(const StudyConfig& cfg);

struct ChiTableEntry {
  ProcessSpec process;
  // mean over replicates of defined cells, row-major lag x threshold
  std::vector<double> mean_chi;
  std::vector<int> n_defined;
  std::vector<int> lags;
  std::vector<double> thresholds;

  double cell(std::size_t lag_index, std::size_t threshold_index) const {
    return mean_chi[lag_index * thresholds.size() + threshold_index];
  }
};
struct ChiTable {
  StudyConfig config;
  std::vector<ChiTableEntry> by_process;
};

// Replicate-averaged empirical tail dependence per (process, lag, threshold).
ChiTable run_chi_table(const StudyConfig& cfg);

// CSV exports (plot-series data).
std::string coverage_records_csv(const CoverageResult& result);
std::string chi_table_csv(const ChiTable& table);

// Credible intervals for the first_k replicates shifted so the replicate's
// true quantile sits at zero; a hit is an interval containing 0.
std::string centered_interval_csv(const CoverageResult& result, int first_k = 20);

}  // namespace markovgev

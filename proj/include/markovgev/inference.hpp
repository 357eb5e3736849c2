#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "markovgev/model.hpp"

namespace markovgev {

struct McmcConfig {
  int n_chains = 2;
  long n_iter = 110000;  // per chain, burn-in included
  long n_burnin = 10000;
  long thin = 20;
  std::uint64_t seed = 0;
  double target_accept = 0.30;  // adaptation aims inside the 0.2-0.4 window
  int max_init_tries = 200;

  long retained_per_chain() const { return (n_iter - n_burnin) / thin; }
  void validate() const;  // throws std::invalid_argument
};

// Retained draws on the natural parameter scale, row-major retained x dim,
// with the originating chain recorded per row.
struct PosteriorDraws {
  ModelSpec spec;
  std::vector<std::string> names;
  std::size_t n_cols = 0;
  std::vector<double> data;
  std::vector<int> chain;
  std::vector<std::vector<double>> acceptance;  // per chain, per coordinate
  std::vector<std::vector<double>> step_scales;  // frozen post-burn-in scales

  std::size_t n_rows() const { return n_cols ? data.size() / n_cols : 0; }
  double at(std::size_t row, std::size_t col) const {
    return data[row * n_cols + col];
  }
  int column_index(const std::string& name) const;  // -1 if absent
  std::vector<double> column(const std::string& name) const;
  // Rows belonging to one chain only (the "first chain only" reporting mode).
  PosteriorDraws chain_subset(int chain_index) const;
};

// Generic componentwise random-walk Metropolis on a log-density, adaptation
// (Robbins-Monro on per-coordinate log step sizes) active during burn-in and
// frozen afterwards. Returns retained states; acceptance/scales through the
// out-parameters. Deterministic given the seed.
struct ChainResult {
  std::vector<std::vector<double>> states;
  std::vector<double> acceptance;
  std::vector<double> scales;
};
ChainResult metropolis_chain(
    const std::function<double(std::span<const double>)>& log_density,
    std::vector<double> init, std::vector<double> scales,
    const McmcConfig& cfg, std::uint64_t chain_seed);

// Posterior sampling for one model; chains run concurrently on independent
// substreams and are merged in chain order, so results do not depend on
// scheduling. Throws NumericError when no valid initial point is found.
PosteriorDraws mcmc_sample(const MaximaSeries& series, const ModelSpec& spec,
                           const PriorSpec& priors, const McmcConfig& cfg);

// Split-chain potential scale reduction; requires at least two chains.
double rhat(const PosteriorDraws& draws, const std::string& param);

// Effective sample size via initial-positive-sequence truncation of the
// combined-chain autocorrelation; requires at least 10 draws.
double ess(const PosteriorDraws& draws, const std::string& param);

struct DicResult {
  double dic = 0.0;
  double p_d = 0.0;
  double mean_deviance = 0.0;
};
// Deviance information criterion with the posterior-mean plug-in (sigma and
// alpha averaged on their natural scales).
DicResult dic(const MaximaSeries& series, const ModelSpec& spec,
              const PosteriorDraws& draws);

// Linear interpolation between order statistics (type-7 convention).
double quantile_type7(std::vector<double> sorted_or_not, double p);

struct SummaryRow {
  std::string name;
  double mean, q025, q05, q50, q95, q975;
};
SummaryRow summarize(const std::string& name, std::vector<double> values);

// Mean and {2.5, 5, 50, 95, 97.5}% quantiles for every parameter (sigma
// reported on the natural scale) plus the conditional next-step quantile
// computed per draw.
std::vector<SummaryRow> posterior_summary(const PosteriorDraws& draws,
                                          const MaximaSeries& series,
                                          double prob = 0.95);

struct MleResult {
  Params params;
  double loglik = 0.0;
  bool converged = false;
  int n_evaluations = 0;
  int best_start = -1;
  std::string message;
};

// Multi-start Nelder-Mead maximization of the log-likelihood in
// unconstrained coordinates (log sigma, logit alpha, xi raw). Starts are
// scattered around moment-based initial values.
MleResult mle_fit(const MaximaSeries& series, const ModelSpec& spec,
                  int n_starts = 8, std::uint64_t seed = 0);

}  // namespace markovgev

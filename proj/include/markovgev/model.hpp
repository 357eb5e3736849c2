#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "markovgev/gev.hpp"

namespace markovgev {

// One of the four model variants: a linear location trend and/or
// first-order Markov logistic dependence on top of GEV margins.
//   M1: stationary independent        M2: trend, independent
//   M3: stationary Markov             M4: trend + Markov
struct ModelSpec {
  bool trend = false;
  bool markov = false;
  bool negate_minima = false;

  int dim() const { return 3 + (trend ? 1 : 0) + (markov ? 1 : 0); }
  std::string name() const;
};

// Parses "M1".."M4" (case-insensitive); throws std::invalid_argument.
ModelSpec model_from_name(const std::string& name, bool negate_minima = false);

// Natural-scale parameters; mu1 is ignored unless spec.trend and alpha is
// ignored unless spec.markov. The flat vector layout is
// [mu0, (mu1), log_sigma, xi, (alpha)].
struct Params {
  double mu0 = 0.0;
  double mu1 = 0.0;
  double log_sigma = 0.0;
  double xi = 0.0;
  double alpha = 1.0;

  double sigma() const { return std::exp(log_sigma); }
};

std::vector<std::string> param_names(const ModelSpec& spec);
std::vector<double> pack_params(const ModelSpec& spec, const Params& p);
Params unpack_params(const ModelSpec& spec, std::span<const double> theta);

// Ordered block maxima with implicit time index t = 1..n. Values are on
// the modeling (maxima) scale: block minima are negated once on ingestion
// and negated back only when reporting.
struct MaximaSeries {
  std::vector<double> values;
  bool negated = false;  // true when values are negated minima
  int first_year = 1;    // calendar label of t = 1, for reporting only

  std::size_t size() const { return values.size(); }
};

// Prior constants for the Bayesian fits; defaults follow the truncated
// normal / beta choices used throughout (xi restricted to (-0.5, 0.5),
// Beta(1.5, 1) favoring moderate-to-weak dependence).
struct PriorSpec {
  double mu0_sd = 100.0;
  double mu1_sd = 15.0;
  double log_sigma_sd = 15.0;
  double xi_sd = 0.15;
  double xi_lower = -0.5;
  double xi_upper = 0.5;
  double alpha_a = 1.5;
  double alpha_b = 1.0;
};

// mu0 + mu1*t under a trend spec, mu0 otherwise; t is the 1-based block
// index, so trend slopes are per block step.
double location_at(long t, const Params& p, const ModelSpec& spec);

// Log-likelihood on the data scale; -inf when any observation falls outside
// the marginal support (signals the invalid region to samplers). With the
// Markov flag the series is transformed to unit Frechet and scored as
//   sum_{t=1}^{n-1} log f(z_t, z_{t+1}) - sum_{t=2}^{n-1} log f(z_t)
// plus the change-of-variables term for every observation.
double log_likelihood(const MaximaSeries& series, const Params& p,
                      const ModelSpec& spec);

double log_prior(const Params& p, const ModelSpec& spec,
                 const PriorSpec& priors = {});

double log_posterior(const MaximaSeries& series, const Params& p,
                     const ModelSpec& spec, const PriorSpec& priors = {});

// Quantile of the next (t = n+1) block maximum at non-exceedance prob,
// conditional on the final observation under Markov specs. Returned on the
// original data scale: negated when the series holds negated minima.
double conditional_q95_next(const MaximaSeries& series, const Params& p,
                            const ModelSpec& spec, double prob = 0.95);

}  // namespace markovgev

#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>

namespace markovgev {

// Raised when an iterative routine cannot reach its contract (bracket
// exhaustion, non-convergence). CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Standard normal cdf, accurate over the full double range.
double norm_cdf(double x);

// Standard normal quantile (Wichura's AS241 rational approximations,
// |error| < 1e-15 for p in (0,1)). Throws std::invalid_argument outside (0,1).
double norm_quantile(double p);

double norm_logpdf(double x, double mean, double sd);

// log(exp(a) + exp(b)) without overflow.
double log_sum_exp(double a, double b);

// Logit and its inverse; logit(1) = +inf is allowed.
double logit(double p);
double inv_logit(double x);

struct RootResult {
  double x = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Brent's method on [a, b] with f(a), f(b) of opposite sign.
// Stops when the bracket collapses to xtol (plus machine epsilon scaled
// by |x|) or f hits zero. Throws NumericError if the root is not bracketed.
RootResult brent(const std::function<double(double)>& f, double a, double b,
                 double xtol = 1e-13, int max_iter = 200);

}  // namespace markovgev

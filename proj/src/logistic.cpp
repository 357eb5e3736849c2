#include "markovgev/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "markovgev/gev.hpp"
#include "markovgev/numeric.hpp"

namespace markovgev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("logistic dependence: alpha must be in (0,1]");
  }
}

// log(x^(-1/a) + y^(-1/a)), evaluated in log space so extreme Frechet
// values do not overflow before the outer ^a pulls them back.
double log_s(double x, double y, double alpha) {
  return log_sum_exp(-std::log(x) / alpha, -std::log(y) / alpha);
}

}  // namespace

double biv_logistic_cdf(double x, double y, double alpha) {
  check_alpha(alpha);
  if (!(x > 0.0) || !(y > 0.0)) return 0.0;
  return std::exp(-std::exp(alpha * log_s(x, y, alpha)));
}

double biv_logistic_logpdf(double x, double y, double alpha) {
  check_alpha(alpha);
  if (!(x > 0.0) || !(y > 0.0)) return -kInf;
  const double ls = log_s(x, y, alpha);
  const double a_ls = alpha * ls;
  if (a_ls > 690.0) return -kInf;  // exp(-S^a) underflows everything else
  const double sa = std::exp(a_ls);
  return -sa - (1.0 / alpha + 1.0) * (std::log(x) + std::log(y)) +
         (alpha - 2.0) * ls + std::log(1.0 / alpha - 1.0 + sa);
}

double conditional_cdf(double y, double given_x, double alpha) {
  check_alpha(alpha);
  if (!(given_x > 0.0)) {
    throw std::invalid_argument("conditional_cdf: given_x must be positive");
  }
  if (!(y > 0.0)) return 0.0;
  const double ls = log_s(given_x, y, alpha);
  const double sa = std::exp(alpha * ls);
  const double log_f = -sa + 1.0 / given_x +
                       (1.0 - 1.0 / alpha) * std::log(given_x) +
                       (alpha - 1.0) * ls;
  return std::min(1.0, std::exp(std::min(log_f, 0.0)));
}

double conditional_quantile(double prob, double given_x, double alpha) {
  check_alpha(alpha);
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::invalid_argument("conditional_quantile: prob must be in (0,1)");
  }
  if (!(given_x > 0.0)) {
    throw std::invalid_argument("conditional_quantile: given_x must be positive");
  }
  double lo = 1e-8;
  double hi = frechet_quantile(prob) * std::max(1.0, given_x);
  int expansions = 0;
  while (conditional_cdf(hi, given_x, alpha) < prob) {
    hi *= 4.0;
    if (++expansions > 60) {
      throw NumericError("conditional_quantile: upper bracket expansion exceeded bound");
    }
  }
  while (conditional_cdf(lo, given_x, alpha) > prob) {
    lo /= 4.0;
    if (++expansions > 60) {
      throw NumericError("conditional_quantile: lower bracket expansion exceeded bound");
    }
  }
  const auto root = brent(
      [&](double y) { return conditional_cdf(y, given_x, alpha) - prob; }, lo,
      hi, 1e-13);
  if (!root.converged) {
    throw NumericError("conditional_quantile: root finder failed to converge");
  }
  return root.x;
}

double conditional_sample(double given_x, double alpha, double u) {
  return conditional_quantile(u, given_x, alpha);
}

double chi_from_alpha(double alpha) {
  check_alpha(alpha);
  return 2.0 - std::exp2(alpha);
}

}  // namespace markovgev

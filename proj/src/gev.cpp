#include "markovgev/gev.hpp"

#include <limits>
#include <stdexcept>

namespace markovgev {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool gev_in_support(double z, const GevParams& p) {
  if (std::abs(p.xi) < kXiTol) return true;
  return 1.0 + p.xi * (z - p.mu) / p.sigma > 0.0;
}

double gev_cdf(double z, const GevParams& p) {
  const double s = (z - p.mu) / p.sigma;
  if (std::abs(p.xi) < kXiTol) {
    return std::exp(-std::exp(-s));
  }
  const double t = 1.0 + p.xi * s;
  if (t <= 0.0) {
    return p.xi > 0.0 ? 0.0 : 1.0;
  }
  return std::exp(-std::exp(-std::log1p(p.xi * s) / p.xi));
}

double gev_logpdf(double z, const GevParams& p) {
  const double s = (z - p.mu) / p.sigma;
  if (std::abs(p.xi) < kXiTol) {
    return -std::log(p.sigma) - s - std::exp(-s);
  }
  const double t = 1.0 + p.xi * s;
  if (t <= 0.0) return -kInf;
  const double lt = std::log1p(p.xi * s);
  return -std::log(p.sigma) - (1.0 / p.xi + 1.0) * lt - std::exp(-lt / p.xi);
}

double gev_pdf(double z, const GevParams& p) {
  const double lp = gev_logpdf(z, p);
  return lp == -kInf ? 0.0 : std::exp(lp);
}

double gev_quantile(double prob, const GevParams& p) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::invalid_argument("gev_quantile: prob must be in (0,1)");
  }
  const double x = -std::log(prob);
  if (std::abs(p.xi) < kXiTol) {
    return p.mu - p.sigma * std::log(x);
  }
  return p.mu + p.sigma * std::expm1(-p.xi * std::log(x)) / p.xi;
}

double frechet_cdf(double z) {
  return z > 0.0 ? std::exp(-1.0 / z) : 0.0;
}

double frechet_logpdf(double z) {
  return z > 0.0 ? -2.0 * std::log(z) - 1.0 / z : -kInf;
}

double frechet_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::invalid_argument("frechet_quantile: prob must be in (0,1)");
  }
  return -1.0 / std::log(prob);
}

double frechet_to_gev(double z, const GevParams& p) {
  if (!(z > 0.0)) {
    throw std::domain_error("frechet_to_gev: z must be positive");
  }
  const double lz = std::log(z);
  if (std::abs(p.xi) < kXiTol) {
    return p.mu + p.sigma * lz;
  }
  return p.mu + p.sigma * std::expm1(p.xi * lz) / p.xi;
}

double gev_to_frechet(double y, const GevParams& p) {
  const double s = (y - p.mu) / p.sigma;
  if (std::abs(p.xi) < kXiTol) {
    return std::exp(s);
  }
  if (1.0 + p.xi * s <= 0.0) {
    throw std::domain_error("gev_to_frechet: y outside the GEV support");
  }
  return std::exp(std::log1p(p.xi * s) / p.xi);
}

double log_jacobian_gev_to_frechet(double y, const GevParams& p) {
  const double s = (y - p.mu) / p.sigma;
  if (std::abs(p.xi) < kXiTol) {
    return s - std::log(p.sigma);
  }
  const double t = 1.0 + p.xi * s;
  if (t <= 0.0) return -kInf;
  return (1.0 / p.xi - 1.0) * std::log1p(p.xi * s) - std::log(p.sigma);
}

}  // namespace markovgev

#pragma once

#include <cmath>

namespace markovgev {

// Location/scale/shape triple of the generalized extreme value family.
// sigma must be positive; the support of z is { 1 + xi*(z-mu)/sigma > 0 }
// (the whole line when xi == 0).
struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  bool valid() const {
    return sigma > 0.0 && std::isfinite(mu) && std::isfinite(sigma) &&
           std::isfinite(xi);
  }
};

// |xi| below this evaluates on the Gumbel (xi -> 0) branch.
inline constexpr double kXiTol = 1e-8;

bool gev_in_support(double z, const GevParams& p);

// cdf is total: outside the support it returns the constant the tail
// orientation dictates (0 below a xi>0 lower endpoint, 1 above a xi<0
// upper endpoint), so likelihood code never has to special-case it.
double gev_cdf(double z, const GevParams& p);
double gev_pdf(double z, const GevParams& p);
double gev_logpdf(double z, const GevParams& p);  // -inf outside the support

// Quantile at non-exceedance probability prob in (0,1).
double gev_quantile(double prob, const GevParams& p);

// Unit Frechet, the GEV(1,1,1) margin used for dependence modeling.
double frechet_cdf(double z);
double frechet_logpdf(double z);
double frechet_quantile(double prob);

// Marginal transform y = mu + sigma*(z^xi - 1)/xi and its inverse
// z = (1 + xi*(y-mu)/sigma)^(1/xi); both strictly increasing, exact
// functional inverses of each other.
double frechet_to_gev(double z, const GevParams& p);
double gev_to_frechet(double y, const GevParams& p);  // throws std::domain_error off-support

// log|dz/dy| of the inverse transform; satisfies
// gev_logpdf(y) = frechet_logpdf(z(y)) + log_jacobian_gev_to_frechet(y).
double log_jacobian_gev_to_frechet(double y, const GevParams& p);

}  // namespace markovgev

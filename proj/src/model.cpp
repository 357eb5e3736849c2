#include "markovgev/model.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>

#include "markovgev/logistic.hpp"
#include "markovgev/numeric.hpp"

namespace markovgev {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string ModelSpec::name() const {
  if (!trend && !markov) return "M1";
  if (trend && !markov) return "M2";
  if (!trend && markov) return "M3";
  return "M4";
}

ModelSpec model_from_name(const std::string& name, bool negate_minima) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  ModelSpec spec;
  spec.negate_minima = negate_minima;
  if (up == "M1") return spec;
  if (up == "M2") { spec.trend = true; return spec; }
  if (up == "M3") { spec.markov = true; return spec; }
  if (up == "M4") { spec.trend = true; spec.markov = true; return spec; }
  throw std::invalid_argument("unknown model name: " + name);
}

std::vector<std::string> param_names(const ModelSpec& spec) {
  std::vector<std::string> names = {"mu0"};
  if (spec.trend) names.push_back("mu1");
  names.push_back("log_sigma");
  names.push_back("xi");
  if (spec.markov) names.push_back("alpha");
  return names;
}

std::vector<double> pack_params(const ModelSpec& spec, const Params& p) {
  std::vector<double> theta = {p.mu0};
  if (spec.trend) theta.push_back(p.mu1);
  theta.push_back(p.log_sigma);
  theta.push_back(p.xi);
  if (spec.markov) theta.push_back(p.alpha);
  return theta;
}

Params unpack_params(const ModelSpec& spec, std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(spec.dim())) {
    throw std::invalid_argument("parameter vector length does not match model");
  }
  Params p;
  std::size_t i = 0;
  p.mu0 = theta[i++];
  if (spec.trend) p.mu1 = theta[i++];
  p.log_sigma = theta[i++];
  p.xi = theta[i++];
  if (spec.markov) p.alpha = theta[i++];
  return p;
}

double location_at(long t, const Params& p, const ModelSpec& spec) {
  return spec.trend ? p.mu0 + p.mu1 * static_cast<double>(t) : p.mu0;
}

double log_likelihood(const MaximaSeries& series, const Params& p,
                      const ModelSpec& spec) {
  const std::size_t n = series.size();
  if (n == 0) throw std::invalid_argument("log_likelihood: empty series");
  const double sigma = p.sigma();
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(p.mu0) ||
      !std::isfinite(p.xi) || (spec.trend && !std::isfinite(p.mu1))) {
    return -kInf;
  }

  if (!spec.markov || n == 1) {
    double ll = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const GevParams g{location_at(static_cast<long>(t) + 1, p, spec), sigma, p.xi};
      const double lp = gev_logpdf(series.values[t], g);
      if (lp == -kInf) return -kInf;
      ll += lp;
    }
    return ll;
  }

  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) return -kInf;

  std::vector<double> z(n);
  double ll = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const GevParams g{location_at(static_cast<long>(t) + 1, p, spec), sigma, p.xi};
    if (!gev_in_support(series.values[t], g)) return -kInf;
    z[t] = gev_to_frechet(series.values[t], g);
    ll += log_jacobian_gev_to_frechet(series.values[t], g);
  }
  for (std::size_t t = 0; t + 1 < n; ++t) {
    ll += biv_logistic_logpdf(z[t], z[t + 1], p.alpha);
  }
  for (std::size_t t = 1; t + 1 < n; ++t) {
    ll -= frechet_logpdf(z[t]);
  }
  return std::isnan(ll) ? -kInf : ll;
}

double log_prior(const Params& p, const ModelSpec& spec,
                 const PriorSpec& priors) {
  double lp = norm_logpdf(p.mu0, 0.0, priors.mu0_sd);
  if (spec.trend) lp += norm_logpdf(p.mu1, 0.0, priors.mu1_sd);
  lp += norm_logpdf(p.log_sigma, 0.0, priors.log_sigma_sd);

  if (!(p.xi > priors.xi_lower && p.xi < priors.xi_upper)) return -kInf;
  const double trunc_mass = norm_cdf(priors.xi_upper / priors.xi_sd) -
                            norm_cdf(priors.xi_lower / priors.xi_sd);
  lp += norm_logpdf(p.xi, 0.0, priors.xi_sd) - std::log(trunc_mass);

  if (spec.markov) {
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) return -kInf;
    lp += (priors.alpha_a - 1.0) * std::log(p.alpha) +
          std::lgamma(priors.alpha_a + priors.alpha_b) -
          std::lgamma(priors.alpha_a) - std::lgamma(priors.alpha_b);
    if (priors.alpha_b != 1.0) {
      if (p.alpha >= 1.0) return -kInf;
      lp += (priors.alpha_b - 1.0) * std::log1p(-p.alpha);
    }
  }
  return lp;
}

double log_posterior(const MaximaSeries& series, const Params& p,
                     const ModelSpec& spec, const PriorSpec& priors) {
  const double lp = log_prior(p, spec, priors);
  if (lp == -kInf) return -kInf;
  return lp + log_likelihood(series, p, spec);
}

double conditional_q95_next(const MaximaSeries& series, const Params& p,
                            const ModelSpec& spec, double prob) {
  const std::size_t n = series.size();
  if (n == 0) throw std::invalid_argument("conditional_q95_next: empty series");
  const double sigma = p.sigma();
  const GevParams next{location_at(static_cast<long>(n) + 1, p, spec), sigma, p.xi};
  double q;
  if (spec.markov) {
    const GevParams last{location_at(static_cast<long>(n), p, spec), sigma, p.xi};
    const double z_last = gev_to_frechet(series.values[n - 1], last);
    const double z_q = conditional_quantile(prob, z_last, p.alpha);
    q = frechet_to_gev(z_q, next);
  } else {
    q = gev_quantile(prob, next);
  }
  return spec.negate_minima ? -q : q;
}

}  // namespace markovgev

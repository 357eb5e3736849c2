#include "markovgev/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "markovgev/numeric.hpp"
#include "markovgev/rng.hpp"

namespace markovgev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286;

double vec_mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double vec_sd(std::span<const double> v) {
  const double m = vec_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Sampling coordinates are unconstrained: alpha goes through a logit and the
// target picks up the log|d alpha / d psi| = log(alpha (1 - alpha)) term.
Params params_from_unconstrained(const ModelSpec& spec,
                                 std::span<const double> psi) {
  Params p;
  std::size_t i = 0;
  p.mu0 = psi[i++];
  if (spec.trend) p.mu1 = psi[i++];
  p.log_sigma = psi[i++];
  p.xi = psi[i++];
  if (spec.markov) p.alpha = inv_logit(psi[i++]);
  return p;
}

std::vector<double> unconstrained_from_params(const ModelSpec& spec,
                                              const Params& p) {
  std::vector<double> psi = {p.mu0};
  if (spec.trend) psi.push_back(p.mu1);
  psi.push_back(p.log_sigma);
  psi.push_back(p.xi);
  if (spec.markov) psi.push_back(logit(std::min(p.alpha, 1.0 - 1e-12)));
  return psi;
}

double truncated_normal_draw(Rng& rng, double sd, double lower, double upper) {
  const double lo = norm_cdf(lower / sd);
  const double hi = norm_cdf(upper / sd);
  return sd * norm_quantile(lo + rng.uniform() * (hi - lo));
}

struct MomentInit {
  double mu0;
  double log_sigma;
};

MomentInit gumbel_moment_init(const MaximaSeries& series) {
  const double sd = vec_sd(series.values);
  const double sigma0 = std::max(sd * std::sqrt(6.0) / M_PI, 1e-8);
  return {vec_mean(series.values) - kEulerGamma * sigma0, std::log(sigma0)};
}

std::vector<double> initial_scales(const MaximaSeries& series,
                                   const ModelSpec& spec) {
  const double n = static_cast<double>(series.size());
  const double sigma0 = std::exp(gumbel_moment_init(series).log_sigma);
  std::vector<double> s = {2.4 * sigma0 / std::sqrt(n)};
  if (spec.trend) s.push_back(2.4 * sigma0 * std::sqrt(12.0) / std::pow(n, 1.5));
  s.push_back(2.0 / std::sqrt(n));
  s.push_back(std::min(0.12, 2.0 / std::sqrt(n)));
  if (spec.markov) s.push_back(0.5);
  return s;
}

// Prior-drawn starting point with the location and log-scale anchored at
// Gumbel moment estimates; trend draws shrink toward zero over retries so a
// valid (finite posterior) start is eventually found.
std::vector<double> initial_point(
    const MaximaSeries& series, const ModelSpec& spec, const PriorSpec& priors,
    const std::function<double(std::span<const double>)>& target, Rng& rng,
    int max_tries) {
  const MomentInit mom = gumbel_moment_init(series);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    const double shrink = 1.0 / (1.0 + 0.05 * attempt);
    Params p;
    p.mu0 = mom.mu0 + 0.2 * std::exp(mom.log_sigma) * rng.normal() * shrink;
    p.log_sigma = mom.log_sigma + 0.2 * rng.normal() * shrink;
    p.xi = truncated_normal_draw(rng, priors.xi_sd, priors.xi_lower, priors.xi_upper);
    if (spec.trend) {
      p.mu1 = priors.mu1_sd * rng.normal() * shrink * shrink;
    }
    if (spec.markov) {
      p.alpha = std::pow(rng.uniform(), 1.0 / priors.alpha_a);
    }
    std::vector<double> psi = unconstrained_from_params(spec, p);
    if (std::isfinite(target(psi))) return psi;
  }
  throw NumericError("mcmc: no valid initial point after bounded retries");
}

}  // namespace

void McmcConfig::validate() const {
  if (n_chains < 1) throw std::invalid_argument("mcmc: n_chains must be >= 1");
  if (n_iter <= n_burnin) throw std::invalid_argument("mcmc: n_iter must exceed n_burnin");
  if (n_burnin < 0 || thin < 1) throw std::invalid_argument("mcmc: invalid burn-in or thinning");
  if (!(target_accept > 0.0 && target_accept < 1.0)) {
    throw std::invalid_argument("mcmc: target_accept must be in (0,1)");
  }
}

int PosteriorDraws::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return static_cast<int>(j);
  }
  return -1;
}

std::vector<double> PosteriorDraws::column(const std::string& name) const {
  const int j = column_index(name);
  if (j < 0) throw std::invalid_argument("no such parameter: " + name);
  std::vector<double> out(n_rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, j);
  return out;
}

PosteriorDraws PosteriorDraws::chain_subset(int chain_index) const {
  PosteriorDraws sub;
  sub.spec = spec;
  sub.names = names;
  sub.n_cols = n_cols;
  sub.acceptance = acceptance;
  sub.step_scales = step_scales;
  for (std::size_t r = 0; r < n_rows(); ++r) {
    if (chain[r] != chain_index) continue;
    sub.chain.push_back(0);
    for (std::size_t j = 0; j < n_cols; ++j) sub.data.push_back(at(r, j));
  }
  return sub;
}

ChainResult metropolis_chain(
    const std::function<double(std::span<const double>)>& log_density,
    std::vector<double> init, std::vector<double> scales,
    const McmcConfig& cfg, std::uint64_t chain_seed) {
  const std::size_t dim = init.size();
  Rng rng(chain_seed);
  std::vector<double> x = std::move(init);
  double fx = log_density(x);
  if (!std::isfinite(fx)) {
    throw NumericError("metropolis_chain: initial point has zero density");
  }
  std::vector<double> log_scale(dim);
  for (std::size_t j = 0; j < dim; ++j) log_scale[j] = std::log(scales[j]);

  ChainResult result;
  result.states.reserve(static_cast<std::size_t>(cfg.retained_per_chain()));
  std::vector<long> accepted(dim, 0);
  long post_burnin = 0;

  for (long iter = 1; iter <= cfg.n_iter; ++iter) {
    const bool adapting = iter <= cfg.n_burnin;
    for (std::size_t j = 0; j < dim; ++j) {
      const double old = x[j];
      x[j] = old + std::exp(log_scale[j]) * rng.normal();
      const double fy = log_density(x);
      const bool accept = std::log(rng.uniform()) < fy - fx;
      if (accept) {
        fx = fy;
      } else {
        x[j] = old;
      }
      if (adapting) {
        const double gamma = std::min(0.1, std::pow(static_cast<double>(iter), -0.6));
        log_scale[j] += gamma * ((accept ? 1.0 : 0.0) - cfg.target_accept);
      } else if (accept) {
        ++accepted[j];
      }
    }
    if (!adapting) {
      ++post_burnin;
      if ((iter - cfg.n_burnin) % cfg.thin == 0) {
        result.states.push_back(x);
      }
    }
  }

  result.acceptance.resize(dim);
  result.scales.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    result.acceptance[j] = static_cast<double>(accepted[j]) /
                           static_cast<double>(std::max<long>(post_burnin, 1));
    result.scales[j] = std::exp(log_scale[j]);
  }
  return result;
}

PosteriorDraws mcmc_sample(const MaximaSeries& series, const ModelSpec& spec,
                           const PriorSpec& priors, const McmcConfig& cfg) {
  cfg.validate();
  if (series.size() < 2) {
    throw std::invalid_argument("mcmc_sample: series must hold at least 2 observations");
  }

  const auto target = [&](std::span<const double> psi) -> double {
    const Params p = params_from_unconstrained(spec, psi);
    double lp = log_posterior(series, p, spec, priors);
    if (spec.markov && lp != -kInf) {
      lp += std::log(p.alpha) + std::log1p(-p.alpha);
    }
    return lp;
  };

  const std::vector<double> scales = initial_scales(series, spec);
  std::vector<ChainResult> chains(cfg.n_chains);
  std::vector<std::exception_ptr> errors(cfg.n_chains);

  const auto run_chain = [&](int c) {
    try {
      Rng init_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(c), 0xA11));
      std::vector<double> psi0 =
          initial_point(series, spec, priors, target, init_rng, cfg.max_init_tries);
      chains[c] = metropolis_chain(
          target, std::move(psi0), scales, cfg,
          derive_seed(cfg.seed, static_cast<std::uint64_t>(c), 0xC4A1));
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  if (cfg.n_chains == 1) {
    run_chain(0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(cfg.n_chains);
    for (int c = 0; c < cfg.n_chains; ++c) workers.emplace_back(run_chain, c);
    for (auto& w : workers) w.join();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  PosteriorDraws draws;
  draws.spec = spec;
  draws.names = param_names(spec);
  draws.n_cols = draws.names.size();
  draws.data.reserve(cfg.n_chains * cfg.retained_per_chain() * draws.n_cols);
  for (int c = 0; c < cfg.n_chains; ++c) {
    for (const auto& psi : chains[c].states) {
      const Params p = params_from_unconstrained(spec, psi);
      const std::vector<double> row = pack_params(spec, p);
      draws.data.insert(draws.data.end(), row.begin(), row.end());
      draws.chain.push_back(c);
    }
    draws.acceptance.push_back(std::move(chains[c].acceptance));
    draws.step_scales.push_back(std::move(chains[c].scales));
  }
  return draws;
}

namespace {

// Splits every chain in half so variance diagnostics detect trends within
// a single chain as well as disagreement between chains.
std::vector<std::vector<double>> split_sequences(const PosteriorDraws& draws,
                                                 const std::string& param) {
  const int col = draws.column_index(param);
  if (col < 0) throw std::invalid_argument("no such parameter: " + param);
  const int n_chains = draws.chain.empty()
                           ? 0
                           : *std::max_element(draws.chain.begin(), draws.chain.end()) + 1;
  std::vector<std::vector<double>> per_chain(n_chains);
  for (std::size_t r = 0; r < draws.n_rows(); ++r) {
    per_chain[draws.chain[r]].push_back(draws.at(r, col));
  }
  std::vector<std::vector<double>> seqs;
  for (auto& c : per_chain) {
    const std::size_t half = c.size() / 2;
    if (half == 0) continue;
    seqs.emplace_back(c.begin(), c.begin() + half);
    seqs.emplace_back(c.begin() + half, c.begin() + 2 * half);
  }
  if (seqs.empty()) throw std::invalid_argument("diagnostics: empty draws");
  // Truncate to a common length.
  std::size_t len = seqs.front().size();
  for (const auto& s : seqs) len = std::min(len, s.size());
  for (auto& s : seqs) s.resize(len);
  return seqs;
}

struct VarianceParts {
  double w = 0.0;         // mean within-sequence variance
  double var_plus = 0.0;  // pooled posterior variance estimate
  std::vector<double> means;
  std::size_t len = 0;
};

VarianceParts variance_parts(const std::vector<std::vector<double>>& seqs) {
  VarianceParts parts;
  parts.len = seqs.front().size();
  double w_sum = 0.0;
  for (const auto& s : seqs) {
    parts.means.push_back(vec_mean(s));
    w_sum += vec_sd(s) * vec_sd(s);
  }
  parts.w = w_sum / static_cast<double>(seqs.size());
  const double b_over_len = seqs.size() > 1 ? vec_sd(parts.means) * vec_sd(parts.means) : 0.0;
  const double len = static_cast<double>(parts.len);
  parts.var_plus = (len - 1.0) / len * parts.w + b_over_len;
  return parts;
}

double autocovariance(const std::vector<double>& s, double mean, std::size_t lag) {
  double acc = 0.0;
  for (std::size_t i = 0; i + lag < s.size(); ++i) {
    acc += (s[i] - mean) * (s[i + lag] - mean);
  }
  return acc / static_cast<double>(s.size());
}

}  // namespace

double rhat(const PosteriorDraws& draws, const std::string& param) {
  const int n_chains = draws.chain.empty()
                           ? 0
                           : *std::max_element(draws.chain.begin(), draws.chain.end()) + 1;
  if (n_chains < 2) {
    throw std::invalid_argument("rhat requires at least 2 chains");
  }
  const auto seqs = split_sequences(draws, param);
  if (seqs.front().size() < 4) {
    throw std::invalid_argument("rhat: chains too short");
  }
  const VarianceParts parts = variance_parts(seqs);
  if (parts.w <= 0.0) return 1.0;  // constant chains
  return std::sqrt(parts.var_plus / parts.w);
}

double ess(const PosteriorDraws& draws, const std::string& param) {
  if (draws.n_rows() < 10) {
    throw std::invalid_argument("ess requires at least 10 draws");
  }
  const auto seqs = split_sequences(draws, param);
  const VarianceParts parts = variance_parts(seqs);
  if (parts.var_plus <= 0.0) return static_cast<double>(draws.n_rows());
  const std::size_t m = seqs.size();
  const std::size_t len = parts.len;

  const auto rho = [&](std::size_t t) {
    double acov = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acov += autocovariance(seqs[j], parts.means[j], t);
    }
    acov /= static_cast<double>(m);
    return 1.0 - (parts.w - acov) / parts.var_plus;
  };

  // Geyer initial positive sequence on paired autocorrelations.
  double tau = 0.0;
  double prev_pair = kInf;
  for (std::size_t k = 0; 2 * k + 1 < len; ++k) {
    double pair = rho(2 * k) + rho(2 * k + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);  // enforce monotone decrease
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  tau -= 1.0;
  tau = std::max(tau, 1e-3);
  return static_cast<double>(m * len) / tau;
}

DicResult dic(const MaximaSeries& series, const ModelSpec& spec,
              const PosteriorDraws& draws) {
  if (draws.n_rows() == 0) throw std::invalid_argument("dic: empty draws");
  const std::size_t R = draws.n_rows();
  double dev_sum = 0.0;
  std::vector<double> natural_mean(draws.n_cols, 0.0);
  const int sigma_col = draws.column_index("log_sigma");
  for (std::size_t r = 0; r < R; ++r) {
    std::vector<double> theta(draws.n_cols);
    for (std::size_t j = 0; j < draws.n_cols; ++j) theta[j] = draws.at(r, j);
    const Params p = unpack_params(spec, theta);
    dev_sum += -2.0 * log_likelihood(series, p, spec);
    for (std::size_t j = 0; j < draws.n_cols; ++j) {
      natural_mean[j] +=
          (static_cast<int>(j) == sigma_col) ? std::exp(theta[j]) : theta[j];
    }
  }
  for (auto& v : natural_mean) v /= static_cast<double>(R);
  natural_mean[sigma_col] = std::log(natural_mean[sigma_col]);
  const Params plug_in = unpack_params(spec, natural_mean);

  DicResult out;
  out.mean_deviance = dev_sum / static_cast<double>(R);
  out.p_d = out.mean_deviance - (-2.0 * log_likelihood(series, plug_in, spec));
  out.dic = out.mean_deviance + out.p_d;
  return out;
}

double quantile_type7(std::vector<double> v, double p) {
  if (v.empty()) throw std::invalid_argument("quantile of empty vector");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0,1]");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

SummaryRow summarize(const std::string& name, std::vector<double> values) {
  SummaryRow row;
  row.name = name;
  row.mean = vec_mean(values);
  std::sort(values.begin(), values.end());
  const auto q = [&](double p) {
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  row.q025 = q(0.025);
  row.q05 = q(0.05);
  row.q50 = q(0.50);
  row.q95 = q(0.95);
  row.q975 = q(0.975);
  return row;
}

std::vector<SummaryRow> posterior_summary(const PosteriorDraws& draws,
                                          const MaximaSeries& series,
                                          double prob) {
  if (draws.n_rows() == 0) {
    throw std::invalid_argument("posterior_summary: empty draws");
  }
  std::vector<SummaryRow> rows;
  for (const auto& name : draws.names) {
    std::vector<double> col = draws.column(name);
    if (name == "log_sigma") {
      for (auto& v : col) v = std::exp(v);
      rows.push_back(summarize("sigma", std::move(col)));
    } else {
      rows.push_back(summarize(name, std::move(col)));
    }
  }
  std::vector<double> q_next(draws.n_rows());
  for (std::size_t r = 0; r < draws.n_rows(); ++r) {
    std::vector<double> theta(draws.n_cols);
    for (std::size_t j = 0; j < draws.n_cols; ++j) theta[j] = draws.at(r, j);
    q_next[r] = conditional_q95_next(series, unpack_params(draws.spec, theta),
                                     draws.spec, prob);
  }
  char label[32];
  std::snprintf(label, sizeof(label), "q%g", prob);
  rows.push_back(summarize(label, std::move(q_next)));
  return rows;
}

namespace {

// Nelder-Mead on a function of dim >= 1, standard reflection/expansion/
// contraction coefficients, convergence on the simplex f-spread.
struct SimplexResult {
  std::vector<double> x;
  double f = kInf;
  bool converged = false;
  int evaluations = 0;
};

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::vector<double> x0, std::span<const double> steps,
                          int max_iter = 4000, double ftol = 1e-10) {
  const std::size_t dim = x0.size();
  std::vector<std::vector<double>> simplex(dim + 1, x0);
  for (std::size_t j = 0; j < dim; ++j) simplex[j + 1][j] += steps[j];

  SimplexResult res;
  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) {
    fv[i] = f(simplex[i]);
    ++res.evaluations;
  }

  std::vector<std::size_t> order(dim + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    if (std::abs(fv[worst] - fv[best]) <=
        ftol * (1.0 + std::abs(fv[best]) + std::abs(fv[worst]))) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
    }
    for (auto& c : centroid) c /= static_cast<double>(dim);

    const auto blend = [&](double coef) {
      std::vector<double> x(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        x[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
      }
      return x;
    };

    std::vector<double> reflected = blend(-1.0);
    double fr = f(reflected);
    ++res.evaluations;
    if (fr < fv[best]) {
      std::vector<double> expanded = blend(-2.0);
      const double fe = f(expanded);
      ++res.evaluations;
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        fv[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      simplex[worst] = std::move(reflected);
      fv[worst] = fr;
    } else {
      std::vector<double> contracted = blend(fr < fv[worst] ? -0.5 : 0.5);
      const double fc = f(contracted);
      ++res.evaluations;
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = std::move(contracted);
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= dim; ++i) {  // shrink toward best
          if (i == best) continue;
          for (std::size_t j = 0; j < dim; ++j) {
            simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
          }
          fv[i] = f(simplex[i]);
          ++res.evaluations;
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i) {
    if (fv[i] < fv[best]) best = i;
  }
  res.x = simplex[best];
  res.f = fv[best];
  return res;
}

}  // namespace

MleResult mle_fit(const MaximaSeries& series, const ModelSpec& spec,
                  int n_starts, std::uint64_t seed) {
  if (series.size() < 2) {
    throw std::invalid_argument("mle_fit: series must hold at least 2 observations");
  }
  const auto objective = [&](std::span<const double> psi) -> double {
    const double ll = log_likelihood(series, params_from_unconstrained(spec, psi), spec);
    return std::isfinite(ll) ? -ll : 1e300;
  };

  const MomentInit mom = gumbel_moment_init(series);
  Rng rng(derive_seed(seed, 0x31e));

  MleResult best;
  best.loglik = -kInf;
  for (int start = 0; start < n_starts; ++start) {
    Params p;
    const double jitter = start == 0 ? 0.0 : 1.0;
    p.mu0 = mom.mu0 + jitter * 0.4 * std::exp(mom.log_sigma) * rng.normal();
    p.log_sigma = mom.log_sigma + jitter * 0.3 * rng.normal();
    p.xi = jitter * 0.12 * rng.normal();
    if (spec.trend) p.mu1 = jitter * 0.05 * std::exp(mom.log_sigma) * rng.normal();
    if (spec.markov) p.alpha = 0.5 + 0.35 * rng.uniform();
    std::vector<double> psi0 = unconstrained_from_params(spec, p);
    if (!std::isfinite(-objective(psi0)) && objective(psi0) >= 1e300) {
      // start outside the support: nudge xi toward zero and retry once
      p.xi *= 0.1;
      psi0 = unconstrained_from_params(spec, p);
    }
    if (objective(psi0) >= 1e300) continue;

    std::vector<double> steps(psi0.size(), 0.1);
    steps[0] = 0.25 * std::exp(mom.log_sigma);
    const SimplexResult run = nelder_mead(objective, psi0, steps);
    best.n_evaluations += run.evaluations;
    if (-run.f > best.loglik) {
      best.loglik = -run.f;
      best.params = params_from_unconstrained(spec, run.x);
      best.converged = run.converged;
      best.best_start = start;
    }
  }
  if (best.loglik == -kInf) {
    throw NumericError("mle_fit: every start landed outside the support");
  }
  best.message = best.converged ? "converged" : "iteration limit reached";
  return best;
}

}  // namespace markovgev

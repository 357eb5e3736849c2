#include "markovgev/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "markovgev/logistic.hpp"
#include "markovgev/numeric.hpp"
#include "markovgev/rng.hpp"

namespace markovgev {

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::IndependentGev: return "independent";
    case ProcessKind::MarkovGev: return "markov";
    case ProcessKind::Ma2Gev: return "ma2";
  }
  return "unknown";
}

ProcessKind process_from_name(const std::string& name) {
  if (name == "independent") return ProcessKind::IndependentGev;
  if (name == "markov") return ProcessKind::MarkovGev;
  if (name == "ma2") return ProcessKind::Ma2Gev;
  throw std::invalid_argument("unknown process: " + name +
                              " (expected independent|markov|ma2)");
}

double ProcessSpec::ma2_scale() {
  return std::sqrt(1.0 + kMa2Theta1 * kMa2Theta1 + kMa2Theta2 * kMa2Theta2);
}

MaximaSeries sim_independent_gev(long n, const GevParams& marginal,
                                 std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sim_independent_gev: n must be >= 1");
  Rng rng(seed);
  MaximaSeries series;
  series.values.reserve(n);
  for (long t = 0; t < n; ++t) {
    series.values.push_back(gev_quantile(rng.uniform(), marginal));
  }
  return series;
}

SimResult sim_markov_gev(long n, const GevParams& marginal, double alpha,
                         std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sim_markov_gev: n must be >= 1");
  Rng rng(seed);
  SimResult out;
  out.series.values.reserve(n);
  double z = frechet_quantile(rng.uniform());
  out.series.values.push_back(frechet_to_gev(z, marginal));
  for (long t = 1; t < n; ++t) {
    z = conditional_sample(z, alpha, rng.uniform());
    out.series.values.push_back(frechet_to_gev(z, marginal));
  }
  out.last_frechet = z;
  out.has_frechet_state = true;
  return out;
}

SimResult sim_ma2_gev(long n, const GevParams& marginal, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sim_ma2_gev: n must be >= 1");
  Rng rng(seed);
  const double s = ProcessSpec::ma2_scale();
  SimResult out;
  out.series.values.reserve(n);
  out.latent_x.reserve(n);
  double w2 = rng.normal();  // W_{t-2}
  double w1 = rng.normal();  // W_{t-1}
  for (long t = 0; t < n; ++t) {
    const double w = rng.normal();
    const double x = w + ProcessSpec::kMa2Theta1 * w1 + ProcessSpec::kMa2Theta2 * w2;
    out.latent_x.push_back(x);
    out.series.values.push_back(gev_quantile(norm_cdf(x / s), marginal));
    w2 = w1;
    w1 = w;
  }
  out.last_w = w1;
  out.prev_w = w2;
  out.has_ma2_state = true;
  return out;
}

SimResult simulate(const ProcessSpec& process, long n, std::uint64_t seed) {
  switch (process.kind) {
    case ProcessKind::IndependentGev: {
      SimResult out;
      out.series = sim_independent_gev(n, process.marginal, seed);
      return out;
    }
    case ProcessKind::MarkovGev:
      return sim_markov_gev(n, process.marginal, process.alpha, seed);
    case ProcessKind::Ma2Gev:
      return sim_ma2_gev(n, process.marginal, seed);
  }
  throw std::invalid_argument("simulate: unknown process kind");
}

double true_conditional_q95(const ProcessSpec& process, const SimResult& state,
                            double prob) {
  switch (process.kind) {
    case ProcessKind::IndependentGev:
      return gev_quantile(prob, process.marginal);
    case ProcessKind::MarkovGev: {
      if (!state.has_frechet_state) {
        throw std::invalid_argument("true_conditional_q95: missing Frechet state");
      }
      const double z_q = conditional_quantile(prob, state.last_frechet, process.alpha);
      return frechet_to_gev(z_q, process.marginal);
    }
    case ProcessKind::Ma2Gev: {
      if (!state.has_ma2_state) {
        throw std::invalid_argument("true_conditional_q95: missing MA(2) state");
      }
      const double s = ProcessSpec::ma2_scale();
      const double x_q = ProcessSpec::kMa2Theta1 * state.last_w +
                         ProcessSpec::kMa2Theta2 * state.prev_w +
                         norm_quantile(prob);
      return gev_quantile(norm_cdf(x_q / s), process.marginal);
    }
  }
  throw std::invalid_argument("true_conditional_q95: unknown process kind");
}

}  // namespace markovgev

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "markovgev/gev.hpp"
#include "markovgev/model.hpp"

namespace markovgev {

enum class ProcessKind { IndependentGev, MarkovGev, Ma2Gev };

std::string to_string(ProcessKind kind);
ProcessKind process_from_name(const std::string& name);  // "independent"|"markov"|"ma2"

// A data-generating process for the simulation study. The MA(2) coefficients
// are fixed; its Gaussian series is rescaled to unit variance and pushed
// through the probability integral transform onto the GEV marginal.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::IndependentGev;
  GevParams marginal{0.0, 1.0, -0.1};
  double alpha = 0.7;  // MarkovGev only

  static constexpr double kMa2Theta1 = 0.45;
  static constexpr double kMa2Theta2 = 0.075;
  // sd of W + theta1*W' + theta2*W'' with iid standard normal W
  static double ma2_scale();
};

// Simulated series plus whatever state the true conditional-quantile oracle
// needs afterwards: the final Frechet value (Markov) or the last two latent
// innovations (MA2).
struct SimResult {
  MaximaSeries series;
  double last_frechet = 0.0;
  bool has_frechet_state = false;
  double last_w = 0.0;   // W_n
  double prev_w = 0.0;   // W_{n-1}
  bool has_ma2_state = false;
  std::vector<double> latent_x;  // pre-transform MA(2) series, empty otherwise
};

MaximaSeries sim_independent_gev(long n, const GevParams& marginal,
                                 std::uint64_t seed);

// z_1 unit Frechet, z_{t+1} drawn by inverse transform from the logistic
// conditional given z_t, then mapped onto the GEV marginal.
SimResult sim_markov_gev(long n, const GevParams& marginal, double alpha,
                         std::uint64_t seed);

// X_t = W_t + 0.45 W_{t-1} + 0.075 W_{t-2} with two warm-up innovations so
// X_1 is already stationary; Y_t = gev_quantile(Phi(X_t / s), marginal).
SimResult sim_ma2_gev(long n, const GevParams& marginal, std::uint64_t seed);

SimResult simulate(const ProcessSpec& process, long n, std::uint64_t seed);

// Exact quantile of the next observation given the process truth and the
// returned state; throws std::invalid_argument when the state is missing.
double true_conditional_q95(const ProcessSpec& process, const SimResult& state,
                            double prob = 0.95);

}  // namespace markovgev

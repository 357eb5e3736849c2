#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace markovgev {

// Empirical tail dependence at lag k and threshold quantile u:
// the fraction of exceedances of the ceil(u*n)-th order statistic (strict
// exceedance) whose lag-k predecessor also exceeds it. Rank-based, so
// invariant under strictly increasing transformations of the data.
// Returns nullopt when the summation range holds no exceedances.
// Throws std::invalid_argument when k >= n or u is outside (0,1).
std::optional<double> chi_hat(std::span<const double> values, int lag, double u);

// chi_hat plus its denominator (the exceedance count over i = k+1..n).
struct ChiCell {
  std::optional<double> estimate;
  long n_exceed = 0;
};
ChiCell chi_cell(std::span<const double> values, int lag, double u);

struct ChiProfile {
  std::vector<int> lags;
  std::vector<double> thresholds;
  std::vector<ChiCell> cells;  // row-major lag x threshold

  const ChiCell& cell(std::size_t lag_index, std::size_t threshold_index) const {
    return cells[lag_index * thresholds.size() + threshold_index];
  }
};

ChiProfile chi_profile(std::span<const double> values, int max_lag = 5,
                       std::vector<double> thresholds = {0.90, 0.925, 0.95});

// Plot-series export, columns lag,threshold,chi_hat,n_exceed; undefined
// estimates serialize as an empty field, never as 0.
std::string chi_profile_csv(const ChiProfile& profile);

}  // namespace markovgev

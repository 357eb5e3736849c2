#include "markovgev/chi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace markovgev {

ChiCell chi_cell(std::span<const double> values, int lag, double u) {
  const long n = static_cast<long>(values.size());
  if (lag < 1 || lag >= n) {
    throw std::invalid_argument("chi_hat: lag must satisfy 1 <= lag < n");
  }
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("chi_hat: threshold u must be in (0,1)");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const long rank = static_cast<long>(std::ceil(u * static_cast<double>(n)));
  const double q = sorted[std::min(rank, n) - 1];

  ChiCell cell;
  long joint = 0;
  for (long i = lag; i < n; ++i) {
    if (values[i] > q) {
      ++cell.n_exceed;
      if (values[i - lag] > q) ++joint;
    }
  }
  if (cell.n_exceed > 0) {
    cell.estimate = static_cast<double>(joint) / static_cast<double>(cell.n_exceed);
  }
  return cell;
}

std::optional<double> chi_hat(std::span<const double> values, int lag, double u) {
  return chi_cell(values, lag, u).estimate;
}

ChiProfile chi_profile(std::span<const double> values, int max_lag,
                       std::vector<double> thresholds) {
  if (max_lag < 1 || static_cast<std::size_t>(max_lag) >= values.size()) {
    throw std::invalid_argument("chi_profile: max_lag must satisfy 1 <= max_lag < n");
  }
  ChiProfile profile;
  profile.thresholds = std::move(thresholds);
  for (int k = 1; k <= max_lag; ++k) {
    profile.lags.push_back(k);
    for (double u : profile.thresholds) {
      profile.cells.push_back(chi_cell(values, k, u));
    }
  }
  return profile;
}

std::string chi_profile_csv(const ChiProfile& profile) {
  std::string out = "lag,threshold,chi_hat,n_exceed\n";
  char buf[96];
  for (std::size_t i = 0; i < profile.lags.size(); ++i) {
    for (std::size_t j = 0; j < profile.thresholds.size(); ++j) {
      const ChiCell& cell = profile.cell(i, j);
      if (cell.estimate) {
        std::snprintf(buf, sizeof(buf), "%d,%.6g,%.10g,%ld\n", profile.lags[i],
                      profile.thresholds[j], *cell.estimate, cell.n_exceed);
      } else {
        std::snprintf(buf, sizeof(buf), "%d,%.6g,,%ld\n", profile.lags[i],
                      profile.thresholds[j], cell.n_exceed);
      }
      out += buf;
    }
  }
  return out;
}

}  // namespace markovgev

// Test-only numerical oracles, kept independent of the library code paths
// they check: quadrature for densities and conditional cdfs, finite
// differences for derivatives, and a KS statistic for simulator output.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10, int depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb),
                              tol, depth);
}

// Total mass of a bivariate density on (0,inf)^2 with unit-Frechet margins.
// Substituting x = -1/log(u) per coordinate flattens the margins onto the
// unit square (the integrand becomes the copula density, O(1) away from the
// corners), which keeps absolute-tolerance quadrature honest across the
// twelve orders of magnitude the raw density spans.
inline double frechet_margin_mass(
    const std::function<double(double, double)>& density,
    double tol_outer = 1e-7, double tol_inner = 1e-9) {
  const double eps = 1e-9;
  const auto transformed = [&](double u, double v) {
    const double lu = std::log(u), lv = std::log(v);
    return density(-1.0 / lu, -1.0 / lv) / (u * lu * lu) / (v * lv * lv);
  };
  return integrate(
      [&](double u) {
        return integrate([&](double v) { return transformed(u, v); }, eps,
                         1.0 - eps, tol_inner);
      },
      eps, 1.0 - eps, tol_outer);
}

inline double central_difference(const std::function<double(double)>& f,
                                 double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// d2/dxdy via the four-point stencil.
inline double mixed_difference(const std::function<double(double, double)>& f,
                               double x, double y, double hx, double hy) {
  return (f(x + hx, y + hy) - f(x - hx, y + hy) - f(x + hx, y - hy) +
          f(x - hx, y - hy)) /
         (4.0 * hx * hy);
}

// Kolmogorov-Smirnov distance between a sample and a cdf.
inline double ks_distance(std::vector<double> sample,
                          const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - F));
    d = std::max(d, std::abs(static_cast<double>(i) / n - F));
  }
  return d;
}

inline double lag_autocorrelation(const std::vector<double>& x, int lag) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + lag < n) num += (x[i] - mean) * (x[i + lag] - mean);
  }
  return num / den;
}

}  // namespace oracles

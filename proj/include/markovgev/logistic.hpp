#pragma once

namespace markovgev {

// Bivariate logistic extreme value model on unit Frechet margins,
// G(x,y) = exp(-(x^(-1/a) + y^(-1/a))^a) with dependence parameter
// a in (0,1]; a = 1 is exact independence, a -> 0 perfect dependence.
// All functions validate a and throw std::invalid_argument outside (0,1].

double biv_logistic_cdf(double x, double y, double alpha);

// Joint log density; -inf for nonpositive arguments. With S = x^(-1/a)+y^(-1/a):
//   f = G(x,y) * (xy)^(-1/a-1) * S^(a-2) * (1/a - 1 + S^a)
double biv_logistic_logpdf(double x, double y, double alpha);

// P(Z_{t+1} <= y | Z_t = x), in closed form as dG/dx divided by the
// Frechet density: exp(-S^a + 1/x) * x^(1-1/a) * S^(a-1).
double conditional_cdf(double y, double given_x, double alpha);

// Smallest y with conditional_cdf(y | x, a) >= prob, by bracketed root
// finding; the result satisfies |conditional_cdf(result) - prob| <= 1e-9.
// Throws NumericError if bracket expansion hits its bound.
double conditional_quantile(double prob, double given_x, double alpha);

// Inverse-transform draw from the conditional distribution, u in (0,1).
double conditional_sample(double given_x, double alpha, double u);

// Tail dependence coefficient chi = 2 - 2^a, strictly decreasing in a,
// 0 at a = 1 (asymptotic independence).
double chi_from_alpha(double alpha);

}  // namespace markovgev

#include <doctest.h>

#include <cmath>

#include "markovgev/gev.hpp"
#include "markovgev/logistic.hpp"
#include "markovgev/numeric.hpp"
#include "markovgev/rng.hpp"
#include "oracles.hpp"

using namespace markovgev;

TEST_CASE("bivariate cdf anchors") {
  CHECK(biv_logistic_cdf(1, 1, 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(biv_logistic_cdf(1, 1, 0.5) == doctest::Approx(std::exp(-std::sqrt(2.0))).epsilon(1e-12));
  // marginalization: the second argument pushed to infinity leaves the margin
  CHECK(biv_logistic_cdf(1.7, 1e12, 0.6) == doctest::Approx(frechet_cdf(1.7)).epsilon(1e-9));
  CHECK(biv_logistic_cdf(-1.0, 1.0, 0.5) == 0.0);
  CHECK_THROWS_AS(biv_logistic_cdf(1, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(biv_logistic_cdf(1, 1, 1.5), std::invalid_argument);
}

TEST_CASE("independence factorizes cdf and density exactly") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const double x = frechet_quantile(rng.uniform());
    const double y = frechet_quantile(rng.uniform());
    CHECK(biv_logistic_cdf(x, y, 1.0) ==
          doctest::Approx(frechet_cdf(x) * frechet_cdf(y)).epsilon(1e-12));
    CHECK(biv_logistic_logpdf(x, y, 1.0) ==
          doctest::Approx(frechet_logpdf(x) + frechet_logpdf(y)).epsilon(1e-10));
    CHECK(conditional_cdf(y, x, 1.0) == doctest::Approx(std::exp(-1.0 / y)).epsilon(1e-12));
  }
}

TEST_CASE("cdf and density are symmetric in their arguments") {
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    const double x = frechet_quantile(rng.uniform());
    const double y = frechet_quantile(rng.uniform());
    const double a = 0.05 + 0.95 * rng.uniform();
    CHECK(biv_logistic_cdf(x, y, a) == doctest::Approx(biv_logistic_cdf(y, x, a)).epsilon(1e-14));
    CHECK(biv_logistic_logpdf(x, y, a) ==
          doctest::Approx(biv_logistic_logpdf(y, x, a)).epsilon(1e-12));
  }
}

TEST_CASE("density matches mixed finite differences of the cdf") {
  for (double a : {0.3, 0.7, 0.95}) {
    for (double x : {0.5, 1.0, 3.0}) {
      for (double y : {0.4, 1.5, 2.5}) {
        const double h = 2e-4;
        const double fd = oracles::mixed_difference(
            [&](double u, double v) { return biv_logistic_cdf(u, v, a); }, x, y,
            h * (1 + x), h * (1 + y));
        CHECK(std::exp(biv_logistic_logpdf(x, y, a)) == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("density integrates to one over the quadrant") {
  for (double a : {0.4, 0.8}) {
    const double total = oracles::frechet_margin_mass(
        [&](double x, double y) { return std::exp(biv_logistic_logpdf(x, y, a)); });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("cdf is 2-increasing on a grid") {
  const double grid[] = {0.2, 0.6, 1.0, 2.0, 5.0, 12.0};
  for (double a : {0.3, 0.7, 1.0}) {
    for (std::size_t i = 0; i + 1 < 6; ++i) {
      for (std::size_t j = 0; j + 1 < 6; ++j) {
        const double mass = biv_logistic_cdf(grid[i + 1], grid[j + 1], a) -
                            biv_logistic_cdf(grid[i], grid[j + 1], a) -
                            biv_logistic_cdf(grid[i + 1], grid[j], a) +
                            biv_logistic_cdf(grid[i], grid[j], a);
        CHECK(mass >= -1e-14);
      }
    }
  }
}

TEST_CASE("closed-form conditional cdf equals the quadrature oracle") {
  // oracle: Eq.-style integral of the joint density divided by the margin
  const auto oracle = [](double y, double x, double a) {
    const double integral = oracles::integrate(
        [&](double v) {
          return v > 0.0 ? std::exp(biv_logistic_logpdf(x, v, a)) : 0.0;
        },
        0.0, y, 1e-12);
    return integral / std::exp(frechet_logpdf(x));
  };
  CHECK(conditional_cdf(1.0, 1.0, 0.5) ==
        doctest::Approx(std::exp(1.0 - std::sqrt(2.0)) / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(conditional_cdf(1.0, 1.0, 0.5) == doctest::Approx(oracle(1.0, 1.0, 0.5)).epsilon(1e-8));

  const double xs[] = {0.3, 0.8, 1.0, 2.5, 8.0};
  const double ys[] = {0.2, 0.7, 1.3, 3.0, 10.0};
  const double alphas[] = {0.3, 0.7, 0.99};
  for (double a : alphas) {
    for (double x : xs) {
      for (double y : ys) {
        CHECK(conditional_cdf(y, x, a) == doctest::Approx(oracle(y, x, a)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("conditional cdf is a proper distribution in y") {
  for (double a : {0.3, 0.8, 1.0}) {
    for (double x : {0.5, 1.0, 20.0}) {
      double prev = 0.0;
      for (double y = 0.05; y < 50.0; y *= 1.6) {
        const double c = conditional_cdf(y, x, a);
        CHECK(c >= prev - 1e-12);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        prev = c;
      }
      CHECK(conditional_cdf(1e-9, x, a) == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(conditional_cdf(1e12, x, a) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("conditional quantile inverts the conditional cdf") {
  CHECK(conditional_quantile(0.95, 3.0, 1.0) ==
        doctest::Approx(-1.0 / std::log(0.95)).epsilon(1e-9));
  for (double p : {0.05, 0.5, 0.95}) {
    for (double x : {0.5, 1.0, 20.0}) {
      for (double a : {0.3, 0.7, 0.99}) {
        const double y = conditional_quantile(p, x, a);
        CHECK(conditional_cdf(y, x, a) == doctest::Approx(p).epsilon(1e-8));
      }
    }
  }
  CHECK_THROWS_AS(conditional_quantile(1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("conditional quantile increases with the conditioning value") {
  for (double a : {0.3, 0.6, 0.9}) {
    double prev = 0.0;
    for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double q = conditional_quantile(0.95, x, a);
      CHECK(q > prev);
      prev = q;
    }
  }
}

TEST_CASE("conditional sampling is deterministic inverse transform") {
  CHECK(conditional_sample(5.0, 1.0, 0.5) == doctest::Approx(-1.0 / std::log(0.5)).epsilon(1e-9));
  CHECK(conditional_sample(2.0, 0.7, 0.37) == conditional_sample(2.0, 0.7, 0.37));

  // empirical cdf of inverse-transform draws against the model cdf
  Rng rng(999);
  std::vector<double> sample(10000);
  const double x = 1.3, a = 0.6;
  for (auto& s : sample) s = conditional_sample(x, a, rng.uniform());
  const double d = oracles::ks_distance(
      sample, [&](double y) { return conditional_cdf(y, x, a); });
  CHECK(d < 0.02);
}

TEST_CASE("chi follows 2 - 2^alpha") {
  CHECK(chi_from_alpha(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(chi_from_alpha(0.657) == doctest::Approx(0.423).epsilon(1e-3));
  CHECK(chi_from_alpha(0.813) == doctest::Approx(0.243).epsilon(1e-3));
  double prev = 1.1;
  for (double a = 0.05; a <= 1.0; a += 0.05) {
    const double c = chi_from_alpha(a);
    CHECK(c < prev);
    CHECK(c >= 0.0);
    CHECK(c < 1.0);
    prev = c;
  }
}

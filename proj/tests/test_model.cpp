#include <doctest.h>

#include <cmath>

#include "markovgev/logistic.hpp"
#include "markovgev/model.hpp"
#include "markovgev/numeric.hpp"
#include "markovgev/rng.hpp"
#include "markovgev/simulate.hpp"

using namespace markovgev;

namespace {

MaximaSeries series_of(std::vector<double> values) {
  MaximaSeries s;
  s.values = std::move(values);
  return s;
}

Params make_params(double mu0, double mu1, double log_sigma, double xi,
                   double alpha) {
  Params p;
  p.mu0 = mu0;
  p.mu1 = mu1;
  p.log_sigma = log_sigma;
  p.xi = xi;
  p.alpha = alpha;
  return p;
}

}  // namespace

TEST_CASE("model names map to trend/markov flags") {
  CHECK(model_from_name("M1").dim() == 3);
  CHECK(model_from_name("M2").dim() == 4);
  CHECK(model_from_name("M3").dim() == 4);
  CHECK(model_from_name("M4").dim() == 5);
  CHECK(model_from_name("m4").name() == "M4");
  CHECK_THROWS_AS(model_from_name("M5"), std::invalid_argument);
  CHECK(param_names(model_from_name("M4")) ==
        std::vector<std::string>{"mu0", "mu1", "log_sigma", "xi", "alpha"});
}

TEST_CASE("pack and unpack are inverse for every model") {
  const Params p = make_params(1.5, -0.2, 0.7, -0.1, 0.8);
  for (const char* name : {"M1", "M2", "M3", "M4"}) {
    const ModelSpec spec = model_from_name(name);
    const auto theta = pack_params(spec, p);
    CHECK(theta.size() == static_cast<std::size_t>(spec.dim()));
    const Params back = unpack_params(spec, theta);
    CHECK(back.mu0 == p.mu0);
    CHECK(back.log_sigma == p.log_sigma);
    CHECK(back.xi == p.xi);
    if (spec.trend) CHECK(back.mu1 == p.mu1);
    if (spec.markov) CHECK(back.alpha == p.alpha);
  }
}

TEST_CASE("location covariate is the one-based block index") {
  CHECK(location_at(1, make_params(5, 0, 0, 0, 1), model_from_name("M2")) == 5.0);
  CHECK(location_at(10, make_params(16.697, -0.120, 0, 0, 1), model_from_name("M2")) ==
        doctest::Approx(15.497).epsilon(1e-12));
  // without the trend flag mu1 is ignored
  CHECK(location_at(10, make_params(5, 123.0, 0, 0, 1), model_from_name("M1")) == 5.0);
}

TEST_CASE("markov likelihood with alpha = 1 reduces to the independent one") {
  const SimResult sim = sim_markov_gev(60, {0, 1, -0.1}, 0.7, 1234);
  const Params indep = make_params(0.3, 0.0, 0.1, -0.05, 1.0);
  const double markov_ll = log_likelihood(sim.series, indep, model_from_name("M3"));
  const double indep_ll = log_likelihood(sim.series, indep, model_from_name("M1"));
  CHECK(markov_ll == doctest::Approx(indep_ll).epsilon(1e-8));
}

TEST_CASE("one out-of-support observation sinks the likelihood") {
  MaximaSeries s = series_of({0.0, 0.5, 100.0});
  const Params p = make_params(0.0, 0.0, 0.0, -0.3, 0.7);  // support y < 10/3
  CHECK(log_likelihood(s, p, model_from_name("M1")) ==
        -std::numeric_limits<double>::infinity());
  CHECK(log_likelihood(s, p, model_from_name("M3")) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("two-point series telescopes to the single pair term") {
  // unit-Frechet marginal parameters make the transform the identity
  MaximaSeries s = series_of({1.0, 2.0});
  const Params p = make_params(1.0, 0.0, 0.0, 1.0, 0.5);
  const double ll = log_likelihood(s, p, model_from_name("M3"));
  CHECK(ll == doctest::Approx(biv_logistic_logpdf(1.0, 2.0, 0.5)).epsilon(1e-12));
  // independently frozen from the corrected closed form
  CHECK(ll == doctest::Approx(-2.7817025627821805).epsilon(1e-10));
}

TEST_CASE("likelihood is continuous as alpha approaches independence") {
  const SimResult sim = sim_markov_gev(80, {0, 1, -0.1}, 0.8, 99);
  const Params near_one = make_params(0.1, 0.0, 0.05, -0.08, 1.0 - 1e-6);
  const Params at_one = make_params(0.1, 0.0, 0.05, -0.08, 1.0);
  const double ll_near = log_likelihood(sim.series, near_one, model_from_name("M3"));
  const double ll_indep = log_likelihood(sim.series, at_one, model_from_name("M1"));
  CHECK(std::abs(ll_near - ll_indep) < 1e-3);
}

TEST_CASE("translation equivariance of the likelihood") {
  const SimResult sim = sim_markov_gev(50, {0, 1, -0.1}, 0.7, 7);
  for (const char* name : {"M1", "M3"}) {
    const ModelSpec spec = model_from_name(name);
    const Params p = make_params(0.2, 0.0, 0.1, -0.1, 0.7);
    const double base = log_likelihood(sim.series, p, spec);
    const double c = 17.25;
    MaximaSeries shifted = sim.series;
    for (auto& v : shifted.values) v += c;
    const Params p_shifted = make_params(0.2 + c, 0.0, 0.1, -0.1, 0.7);
    CHECK(log_likelihood(shifted, p_shifted, spec) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("prior anchors") {
  const ModelSpec m4 = model_from_name("M4");
  CHECK(log_prior(make_params(0, 0, 0, 0.6, 0.5), m4) ==
        -std::numeric_limits<double>::infinity());
  CHECK(log_prior(make_params(0, 0, 0, -0.51, 0.5), m4) ==
        -std::numeric_limits<double>::infinity());
  CHECK(log_prior(make_params(0, 0, 0, 0.0, 1.5), m4) ==
        -std::numeric_limits<double>::infinity());

  // Beta(1.5,1) density at alpha = 1 is exactly 1.5
  const double at_one = log_prior(make_params(0, 0, 0, 0.0, 1.0), m4);
  const double at_quarter = log_prior(make_params(0, 0, 0, 0.0, 0.25), m4);
  CHECK(at_one - at_quarter ==
        doctest::Approx(std::log(1.5) - std::log(1.5 * std::sqrt(0.25))).epsilon(1e-12));

  // mu0 contribution at zero is the normal normalizing constant
  const ModelSpec m1 = model_from_name("M1");
  const double base = log_prior(make_params(0, 0, 0, 0.0, 1.0), m1);
  const double moved = log_prior(make_params(100, 0, 0, 0.0, 1.0), m1);
  CHECK(base - moved == doctest::Approx(0.5).epsilon(1e-12));  // (100/100)^2 / 2
  CHECK(-std::log(100.0 * std::sqrt(2.0 * M_PI)) ==
        doctest::Approx(norm_logpdf(0.0, 0.0, 100.0)).epsilon(1e-12));

  // truncated-normal normalization is included
  const PriorSpec priors;
  const double trunc_mass = norm_cdf(priors.xi_upper / priors.xi_sd) -
                            norm_cdf(priors.xi_lower / priors.xi_sd);
  const double xi_only = log_prior(make_params(0, 0, 0, 0.12, 1.0), m1) -
                         log_prior(make_params(0, 0, 0, 0.0, 1.0), m1);
  CHECK(xi_only == doctest::Approx(norm_logpdf(0.12, 0, 0.15) -
                                   norm_logpdf(0.0, 0, 0.15)).epsilon(1e-12));
  CHECK(trunc_mass == doctest::Approx(0.9991418793336064).epsilon(1e-12));
}

TEST_CASE("posterior is the sum of its parts and -inf dominates") {
  const SimResult sim = sim_markov_gev(40, {0, 1, -0.1}, 0.7, 21);
  const ModelSpec spec = model_from_name("M4");
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const Params p = make_params(rng.normal(0, 1), rng.normal(0, 0.05),
                                 rng.normal(0, 0.3), -0.4 + 0.8 * rng.uniform(),
                                 0.05 + 0.9 * rng.uniform());
    const double lp = log_posterior(sim.series, p, spec);
    const double expected = log_prior(p, spec) + log_likelihood(sim.series, p, spec);
    if (std::isfinite(expected)) {
      CHECK(lp == doctest::Approx(expected).epsilon(1e-12));
    } else {
      CHECK(lp == expected);
    }
  }
  // xi outside the prior truncation but with a scale wide enough that every
  // observation stays in the likelihood support
  const Params bad_prior = make_params(0, 0, std::log(5.0), 0.7, 0.5);
  CHECK(std::isfinite(log_likelihood(sim.series, bad_prior, spec)));
  CHECK(log_posterior(sim.series, bad_prior, spec) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("negating minima equals fitting maxima of the negated series") {
  // minima data: the pipeline negates once; fitting the negated values as
  // maxima is definitionally the same evaluation
  const SimResult sim = sim_markov_gev(30, {-20, 3, -0.1}, 0.7, 31);
  std::vector<double> minima;
  for (double v : sim.series.values) minima.push_back(-v);

  MaximaSeries ingested;
  ingested.negated = true;
  for (double v : minima) ingested.values.push_back(-v);

  const Params p = make_params(-19.0, 0.0, 1.0, -0.1, 0.7);
  const ModelSpec spec_neg = model_from_name("M3", true);
  const ModelSpec spec_plain = model_from_name("M3", false);
  CHECK(log_likelihood(ingested, p, spec_neg) ==
        log_likelihood(sim.series, p, spec_plain));
  // the reported quantile flips sign, nothing else
  CHECK(conditional_q95_next(ingested, p, spec_neg) ==
        doctest::Approx(-conditional_q95_next(sim.series, p, spec_plain)).epsilon(1e-12));
}

TEST_CASE("conditional next-step quantile anchors") {
  MaximaSeries s = series_of({0.4, 1.1, 0.2, 0.9});

  // independent spec with Gumbel margins: plain quantile
  const Params gumbel = make_params(0.0, 0.0, 0.0, 0.0, 1.0);
  CHECK(conditional_q95_next(s, gumbel, model_from_name("M1")) ==
        doctest::Approx(2.9701952490421637).epsilon(1e-10));

  // alpha = 1 under the markov spec equals the independent result
  const Params indep_markov = make_params(0.0, 0.0, 0.0, -0.1, 1.0);
  CHECK(conditional_q95_next(s, indep_markov, model_from_name("M3")) ==
        doctest::Approx(conditional_q95_next(s, indep_markov, model_from_name("M1")))
            .epsilon(1e-9));

  // strictly increasing in prob
  const Params dep = make_params(0.0, 0.0, 0.0, -0.1, 0.6);
  double prev = -1e9;
  for (double prob : {0.5, 0.8, 0.9, 0.95, 0.99}) {
    const double q = conditional_q95_next(s, dep, model_from_name("M3"), prob);
    CHECK(q > prev);
    prev = q;
  }

  // under positive dependence, nondecreasing in the final observation
  prev = -1e9;
  for (double last : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    MaximaSeries grown = series_of({0.4, last});
    const double q = conditional_q95_next(grown, dep, model_from_name("M3"));
    CHECK(q >= prev);
    prev = q;
  }

  // trend spec forecasts with the t = n+1 location
  const Params trend = make_params(1.0, 0.5, 0.0, 0.0, 1.0);
  const double q_trend = conditional_q95_next(s, trend, model_from_name("M2"));
  CHECK(q_trend == doctest::Approx(1.0 + 0.5 * 5.0 + 2.9701952490421637).epsilon(1e-10));
}

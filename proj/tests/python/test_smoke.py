"""Smoke tests for the compiled extension: exact anchors, determinism, and a
tiny end-to-end fit."""

import math

import numpy as np
import pytest

import markovgev as mg


def test_chi_from_alpha_anchors():
    assert mg.chi_from_alpha(1.0) == pytest.approx(0.0, abs=1e-15)
    assert mg.chi_from_alpha(0.657) == pytest.approx(0.423, abs=1e-3)
    assert mg.chi_from_alpha(0.813) == pytest.approx(0.243, abs=1e-3)


def test_gev_quantile_roundtrip():
    q = mg.gev_quantile(0.95, 0.0, 1.0, 0.0)
    assert q == pytest.approx(-math.log(-math.log(0.95)), abs=1e-12)
    assert mg.gev_cdf(q, 0.0, 1.0, 0.0) == pytest.approx(0.95, abs=1e-12)
    y = mg.frechet_to_gev(3.7, 2.0, 0.5, 0.2)
    assert mg.gev_to_frechet(y, 2.0, 0.5, 0.2) == pytest.approx(3.7, abs=1e-10)


def test_conditional_cdf_anchor():
    value = mg.conditional_cdf(1.0, 1.0, 0.5)
    assert value == pytest.approx(math.exp(1 - math.sqrt(2)) / math.sqrt(2), abs=1e-12)
    q = mg.conditional_quantile(0.95, 2.0, 0.7)
    assert mg.conditional_cdf(q, 2.0, 0.7) == pytest.approx(0.95, abs=1e-8)


def test_simulators_deterministic_and_distinct():
    a = mg.simulate_independent(200, seed=7)
    b = mg.simulate_independent(200, seed=7)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, mg.simulate_independent(200, seed=8))
    assert len(np.unique(a)) == 200

    m1 = mg.simulate_markov(100, alpha=0.7, seed=3)
    m2 = mg.simulate_markov(100, alpha=0.7, seed=3)
    np.testing.assert_array_equal(m1["values"], m2["values"])
    assert m1["last_frechet"] == m2["last_frechet"]


def test_likelihood_independence_reduction():
    v = list(mg.simulate_markov(300, alpha=0.7, seed=11)["values"])
    markov = mg.log_likelihood(v, "M3", [0.0, 0.0, -0.1, 1.0])
    indep = mg.log_likelihood(v, "M1", [0.0, 0.0, -0.1])
    assert markov == pytest.approx(indep, abs=1e-8)


def test_chi_hat_hand_value():
    ramp = list(range(1, 101))
    assert mg.chi_hat(ramp, 1, 0.95) == pytest.approx(0.8, abs=1e-12)
    assert mg.chi_hat([1.0, 5.0, 2.0, 0.5, 3.0, 4.0, 2.5, 0.1, 4.5, 1.5], 9, 0.85) is None


def test_mcmc_fit_roundtrip():
    v = list(mg.simulate_markov(80, alpha=0.7, seed=21)["values"])
    draws = mg.mcmc_sample(v, "M3", n_chains=2, n_iter=4000, n_burnin=1000,
                           thin=5, seed=13)
    assert draws.n_rows() == 2 * (4000 - 1000) // 5
    assert draws.names == ["mu0", "log_sigma", "xi", "alpha"]
    arr = draws.to_numpy()
    assert arr.shape == (draws.n_rows(), 4)
    alpha = draws.column("alpha")
    assert all(0.0 < a <= 1.0 for a in alpha)
    assert mg.rhat(draws, "alpha") < 1.2
    summary = mg.posterior_summary(draws, v)
    assert set(summary) == {"mu0", "sigma", "xi", "alpha", "q0.95"}
    assert summary["sigma"]["mean"] > 0.0
    out = mg.dic(v, draws)
    assert out["p_d"] > 0.0

    again = mg.mcmc_sample(v, "M3", n_chains=2, n_iter=4000, n_burnin=1000,
                           thin=5, seed=13)
    np.testing.assert_array_equal(arr, again.to_numpy())


def test_mle_consistency_quick():
    v = list(mg.simulate_independent(3000, seed=5))
    fit = mg.mle_fit(v, "M1", n_starts=4, seed=2)
    assert fit["params"]["mu0"] == pytest.approx(0.0, abs=0.08)
    assert fit["params"]["sigma"] == pytest.approx(1.0, abs=0.08)
    assert fit["params"]["xi"] == pytest.approx(-0.1, abs=0.08)


def test_true_quantiles():
    assert mg.true_q95_independent() == pytest.approx(2.5697049535959873, abs=1e-12)
    assert mg.true_q95_markov(1.0, 1.0) == pytest.approx(
        mg.true_q95_independent(), abs=1e-8)
    ma2 = mg.simulate_ma2(1000, seed=4)
    q = mg.true_q95_ma2(ma2["last_w"], ma2["prev_w"])
    assert np.isfinite(q)

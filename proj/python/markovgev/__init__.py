"""Extreme-value analysis of serially dependent block maxima.

GEV margins with a first-order Markov bivariate-logistic dependence
structure: distribution functions, the Markov likelihood, Bayesian MCMC
fitting, simulators for the study processes, and empirical tail-dependence
diagnostics. The heavy lifting lives in the compiled `_core` extension.
"""

from ._core import (
    biv_logistic_cdf,
    biv_logistic_logpdf,
    chi_from_alpha,
    chi_hat,
    chi_profile,
    conditional_cdf,
    conditional_q95_next,
    conditional_quantile,
    conditional_sample,
    dic,
    ess,
    frechet_cdf,
    frechet_logpdf,
    frechet_quantile,
    frechet_to_gev,
    gev_cdf,
    gev_logpdf,
    gev_pdf,
    gev_quantile,
    gev_to_frechet,
    log_likelihood,
    log_posterior,
    log_prior,
    mcmc_sample,
    mle_fit,
    param_names,
    posterior_summary,
    PosteriorDraws,
    rhat,
    run_chi_table,
    run_coverage_study,
    simulate_independent,
    simulate_ma2,
    simulate_markov,
    true_q95_independent,
    true_q95_ma2,
    true_q95_markov,
)

__all__ = [
    "biv_logistic_cdf",
    "biv_logistic_logpdf",
    "chi_from_alpha",
    "chi_hat",
    "chi_profile",
    "conditional_cdf",
    "conditional_q95_next",
    "conditional_quantile",
    "conditional_sample",
    "dic",
    "ess",
    "frechet_cdf",
    "frechet_logpdf",
    "frechet_quantile",
    "frechet_to_gev",
    "gev_cdf",
    "gev_logpdf",
    "gev_pdf",
    "gev_quantile",
    "gev_to_frechet",
    "log_likelihood",
    "log_posterior",
    "log_prior",
    "mcmc_sample",
    "mle_fit",
    "param_names",
    "posterior_summary",
    "PosteriorDraws",
    "rhat",
    "run_chi_table",
    "run_coverage_study",
    "simulate_independent",
    "simulate_ma2",
    "simulate_markov",
    "true_q95_independent",
    "true_q95_ma2",
    "true_q95_markov",
]

__version__ = "0.1.0"

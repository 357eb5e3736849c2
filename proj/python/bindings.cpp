#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "markovgev/chi.hpp"
#include "markovgev/inference.hpp"
#include "markovgev/io.hpp"
#include "markovgev/logistic.hpp"
#include "markovgev/model.hpp"
#include "markovgev/numeric.hpp"
#include "markovgev/simulate.hpp"
#include "markovgev/study.hpp"

namespace py = pybind11;
using namespace markovgev;

namespace {

MaximaSeries make_series(const std::vector<double>& values, bool negated) {
  MaximaSeries s;
  s.values = values;
  s.negated = negated;
  return s;
}

ModelSpec make_spec(const std::string& model, bool negated) {
  return model_from_name(model, negated);
}

Params theta_to_params(const ModelSpec& spec, const std::vector<double>& theta) {
  return unpack_params(spec, theta);
}

py::array_t<double> to_numpy(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict summary_to_dict(const std::vector<SummaryRow>& rows) {
  py::dict out;
  for (const auto& r : rows) {
    py::dict row;
    row["mean"] = r.mean;
    row["q2.5"] = r.q025;
    row["q5"] = r.q05;
    row["q50"] = r.q50;
    row["q95"] = r.q95;
    row["q97.5"] = r.q975;
    out[py::str(r.name)] = row;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Extreme-value analysis of serially dependent block maxima: "
            "GEV margins, bivariate logistic dependence, first-order Markov "
            "likelihood, Bayesian MCMC, simulators and tail diagnostics.";

  // distributions
  m.def("gev_cdf", [](double z, double mu, double sigma, double xi) {
    return gev_cdf(z, GevParams{mu, sigma, xi});
  }, py::arg("z"), py::arg("mu"), py::arg("sigma"), py::arg("xi"));
  m.def("gev_pdf", [](double z, double mu, double sigma, double xi) {
    return gev_pdf(z, GevParams{mu, sigma, xi});
  }, py::arg("z"), py::arg("mu"), py::arg("sigma"), py::arg("xi"));
  m.def("gev_logpdf", [](double z, double mu, double sigma, double xi) {
    return gev_logpdf(z, GevParams{mu, sigma, xi});
  }, py::arg("z"), py::arg("mu"), py::arg("sigma"), py::arg("xi"));
  m.def("gev_quantile", [](double prob, double mu, double sigma, double xi) {
    return gev_quantile(prob, GevParams{mu, sigma, xi});
  }, py::arg("prob"), py::arg("mu"), py::arg("sigma"), py::arg("xi"));
  m.def("frechet_cdf", &frechet_cdf, py::arg("z"));
  m.def("frechet_logpdf", &frechet_logpdf, py::arg("z"));
  m.def("frechet_quantile", &frechet_quantile, py::arg("prob"));
  m.def("frechet_to_gev", [](double z, double mu, double sigma, double xi) {
    return frechet_to_gev(z, GevParams{mu, sigma, xi});
  }, py::arg("z"), py::arg("mu"), py::arg("sigma"), py::arg("xi"));
  m.def("gev_to_frechet", [](double y, double mu, double sigma, double xi) {
    return gev_to_frechet(y, GevParams{mu, sigma, xi});
  }, py::arg("y"), py::arg("mu"), py::arg("sigma"), py::arg("xi"));

  // logistic dependence
  m.def("biv_logistic_cdf", &biv_logistic_cdf, py::arg("x"), py::arg("y"), py::arg("alpha"));
  m.def("biv_logistic_logpdf", &biv_logistic_logpdf, py::arg("x"), py::arg("y"), py::arg("alpha"));
  m.def("conditional_cdf", &conditional_cdf, py::arg("y"), py::arg("given_x"), py::arg("alpha"));
  m.def("conditional_quantile", &conditional_quantile, py::arg("prob"), py::arg("given_x"), py::arg("alpha"));
  m.def("conditional_sample", &conditional_sample, py::arg("given_x"), py::arg("alpha"), py::arg("u"));
  m.def("chi_from_alpha", &chi_from_alpha, py::arg("alpha"));

  // model evaluation; values are on the modeling (maxima) scale
  m.def("param_names", [](const std::string& model) {
    return param_names(make_spec(model, false));
  }, py::arg("model"));
  m.def("log_likelihood",
        [](const std::vector<double>& values, const std::string& model,
           const std::vector<double>& theta) {
          const ModelSpec spec = make_spec(model, false);
          return log_likelihood(make_series(values, false),
                                theta_to_params(spec, theta), spec);
        },
        py::arg("values"), py::arg("model"), py::arg("theta"),
        "theta layout: [mu0, (mu1), log_sigma, xi, (alpha)]");
  m.def("log_prior",
        [](const std::string& model, const std::vector<double>& theta) {
          const ModelSpec spec = make_spec(model, false);
          return log_prior(theta_to_params(spec, theta), spec);
        },
        py::arg("model"), py::arg("theta"));
  m.def("log_posterior",
        [](const std::vector<double>& values, const std::string& model,
           const std::vector<double>& theta) {
          const ModelSpec spec = make_spec(model, false);
          return log_posterior(make_series(values, false),
                               theta_to_params(spec, theta), spec);
        },
        py::arg("values"), py::arg("model"), py::arg("theta"));
  m.def("conditional_q95_next",
        [](const std::vector<double>& values, const std::string& model,
           const std::vector<double>& theta, double prob, bool negated) {
          const ModelSpec spec = make_spec(model, negated);
          return conditional_q95_next(make_series(values, negated),
                                      theta_to_params(spec, theta), spec, prob);
        },
        py::arg("values"), py::arg("model"), py::arg("theta"),
        py::arg("prob") = 0.95, py::arg("negated") = false);

  // inference
  py::class_<PosteriorDraws>(m, "PosteriorDraws")
      .def_property_readonly("names", [](const PosteriorDraws& d) { return d.names; })
      .def_property_readonly("chain", [](const PosteriorDraws& d) { return d.chain; })
      .def_property_readonly("acceptance",
                             [](const PosteriorDraws& d) { return d.acceptance; })
      .def("n_rows", &PosteriorDraws::n_rows)
      .def("chain_subset", &PosteriorDraws::chain_subset, py::arg("chain_index"))
      .def("column", &PosteriorDraws::column, py::arg("name"))
      .def("to_numpy", [](const PosteriorDraws& d) {
        const auto rows = static_cast<py::ssize_t>(d.n_rows());
        const auto cols = static_cast<py::ssize_t>(d.n_cols);
        return py::array_t<double>({rows, cols},
                                   {cols * static_cast<py::ssize_t>(sizeof(double)),
                                    static_cast<py::ssize_t>(sizeof(double))},
                                   d.data.data());
      });

  m.def("mcmc_sample",
        [](const std::vector<double>& values, const std::string& model,
           int n_chains, long n_iter, long n_burnin, long thin,
           std::uint64_t seed, bool negated) {
          McmcConfig cfg;
          cfg.n_chains = n_chains;
          cfg.n_iter = n_iter;
          cfg.n_burnin = n_burnin;
          cfg.thin = thin;
          cfg.seed = seed;
          return mcmc_sample(make_series(values, negated),
                             make_spec(model, negated), PriorSpec{}, cfg);
        },
        py::arg("values"), py::arg("model"), py::arg("n_chains") = 2,
        py::arg("n_iter") = 12000, py::arg("n_burnin") = 2000,
        py::arg("thin") = 5, py::arg("seed") = 0, py::arg("negated") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("rhat", &rhat, py::arg("draws"), py::arg("param"));
  m.def("ess", &ess, py::arg("draws"), py::arg("param"));
  m.def("dic",
        [](const std::vector<double>& values, const PosteriorDraws& draws) {
          const DicResult r = dic(make_series(values, draws.spec.negate_minima),
                                  draws.spec, draws);
          py::dict out;
          out["dic"] = r.dic;
          out["p_d"] = r.p_d;
          out["mean_deviance"] = r.mean_deviance;
          return out;
        },
        py::arg("values"), py::arg("draws"));
  m.def("posterior_summary",
        [](const PosteriorDraws& draws, const std::vector<double>& values,
           double prob) {
          return summary_to_dict(posterior_summary(
              draws, make_series(values, draws.spec.negate_minima), prob));
        },
        py::arg("draws"), py::arg("values"), py::arg("prob") = 0.95);
  m.def("mle_fit",
        [](const std::vector<double>& values, const std::string& model,
           int n_starts, std::uint64_t seed) {
          const ModelSpec spec = make_spec(model, false);
          MleResult r;
          {
            py::gil_scoped_release release;
            r = mle_fit(make_series(values, false), spec, n_starts, seed);
          }
          py::dict out;
          out["theta"] = pack_params(spec, r.params);
          out["names"] = param_names(spec);
          out["loglik"] = r.loglik;
          out["converged"] = r.converged;
          py::dict params;
          params["mu0"] = r.params.mu0;
          params["mu1"] = r.params.mu1;
          params["sigma"] = r.params.sigma();
          params["xi"] = r.params.xi;
          params["alpha"] = r.params.alpha;
          out["params"] = params;
          return out;
        },
        py::arg("values"), py::arg("model"), py::arg("n_starts") = 8,
        py::arg("seed") = 0);

  // simulators
  m.def("simulate_independent",
        [](long n, double mu, double sigma, double xi, std::uint64_t seed) {
          return to_numpy(sim_independent_gev(n, GevParams{mu, sigma, xi}, seed).values);
        },
        py::arg("n"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
        py::arg("xi") = -0.1, py::arg("seed") = 1);
  m.def("simulate_markov",
        [](long n, double alpha, double mu, double sigma, double xi,
           std::uint64_t seed) {
          const SimResult r = sim_markov_gev(n, GevParams{mu, sigma, xi}, alpha, seed);
          py::dict out;
          out["values"] = to_numpy(r.series.values);
          out["last_frechet"] = r.last_frechet;
          return out;
        },
        py::arg("n"), py::arg("alpha") = 0.7, py::arg("mu") = 0.0,
        py::arg("sigma") = 1.0, py::arg("xi") = -0.1, py::arg("seed") = 1);
  m.def("simulate_ma2",
        [](long n, double mu, double sigma, double xi, std::uint64_t seed) {
          const SimResult r = sim_ma2_gev(n, GevParams{mu, sigma, xi}, seed);
          py::dict out;
          out["values"] = to_numpy(r.series.values);
          out["latent_x"] = to_numpy(r.latent_x);
          out["last_w"] = r.last_w;
          out["prev_w"] = r.prev_w;
          return out;
        },
        py::arg("n"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
        py::arg("xi") = -0.1, py::arg("seed") = 1);
  m.def("true_q95_independent",
        [](double mu, double sigma, double xi, double prob) {
          ProcessSpec p;
          p.kind = ProcessKind::IndependentGev;
          p.marginal = GevParams{mu, sigma, xi};
          return true_conditional_q95(p, SimResult{}, prob);
        },
        py::arg("mu") = 0.0, py::arg("sigma") = 1.0, py::arg("xi") = -0.1,
        py::arg("prob") = 0.95);
  m.def("true_q95_markov",
        [](double last_frechet, double alpha, double mu, double sigma,
           double xi, double prob) {
          ProcessSpec p;
          p.kind = ProcessKind::MarkovGev;
          p.marginal = GevParams{mu, sigma, xi};
          p.alpha = alpha;
          SimResult state;
          state.last_frechet = last_frechet;
          state.has_frechet_state = true;
          return true_conditional_q95(p, state, prob);
        },
        py::arg("last_frechet"), py::arg("alpha"), py::arg("mu") = 0.0,
        py::arg("sigma") = 1.0, py::arg("xi") = -0.1, py::arg("prob") = 0.95);
  m.def("true_q95_ma2",
        [](double last_w, double prev_w, double mu, double sigma, double xi,
           double prob) {
          ProcessSpec p;
          p.kind = ProcessKind::Ma2Gev;
          p.marginal = GevParams{mu, sigma, xi};
          SimResult state;
          state.last_w = last_w;
          state.prev_w = prev_w;
          state.has_ma2_state = true;
          return true_conditional_q95(p, state, prob);
        },
        py::arg("last_w"), py::arg("prev_w"), py::arg("mu") = 0.0,
        py::arg("sigma") = 1.0, py::arg("xi") = -0.1, py::arg("prob") = 0.95);

  // tail diagnostics
  m.def("chi_hat",
        [](const std::vector<double>& values, int lag, double u) -> py::object {
          const auto est = chi_hat(values, lag, u);
          return est ? py::cast(*est) : py::none();
        },
        py::arg("values"), py::arg("lag"), py::arg("u"));
  m.def("chi_profile",
        [](const std::vector<double>& values, int max_lag,
           std::vector<double> thresholds) {
          const ChiProfile p = chi_profile(values, max_lag, std::move(thresholds));
          py::list cells;
          for (std::size_t i = 0; i < p.lags.size(); ++i) {
            for (std::size_t j = 0; j < p.thresholds.size(); ++j) {
              const ChiCell& c = p.cell(i, j);
              py::dict cell;
              cell["lag"] = p.lags[i];
              cell["threshold"] = p.thresholds[j];
              cell["chi_hat"] = c.estimate ? py::cast(*c.estimate) : py::none();
              cell["n_exceed"] = c.n_exceed;
              cells.append(cell);
            }
          }
          return cells;
        },
        py::arg("values"), py::arg("max_lag") = 5,
        py::arg("thresholds") = std::vector<double>{0.90, 0.925, 0.95});

  // study harness
  m.def("run_chi_table",
        [](int replicates, int length, std::uint64_t seed, int threads,
           int max_lag, std::vector<double> thresholds) {
          StudyConfig cfg = default_study_config();
          cfg.chi_replicates = replicates;
          cfg.series_length = length;
          cfg.master_seed = seed;
          cfg.threads = threads;
          cfg.chi_max_lag = max_lag;
          cfg.chi_thresholds = std::move(thresholds);
          ChiTable table;
          {
            py::gil_scoped_release release;
            table = run_chi_table(cfg);
          }
          py::dict out;
          for (const auto& entry : table.by_process) {
            py::dict per;
            for (std::size_t j = 0; j < entry.thresholds.size(); ++j) {
              py::list row;
              for (std::size_t i = 0; i < entry.lags.size(); ++i) {
                row.append(entry.cell(i, j));
              }
              per[py::cast(entry.thresholds[j])] = row;
            }
            out[py::str(to_string(entry.process.kind))] = per;
          }
          return out;
        },
        py::arg("replicates") = 400, py::arg("length") = 100,
        py::arg("seed") = 1, py::arg("threads") = 0, py::arg("max_lag") = 5,
        py::arg("thresholds") = std::vector<double>{0.90, 0.925, 0.95});
  m.def("run_coverage_study",
        [](int replicates, int length, std::uint64_t seed, int threads,
           long n_iter, long n_burnin, long thin) {
          StudyConfig cfg = default_study_config();
          cfg.n_replicates = replicates;
          cfg.series_length = length;
          cfg.master_seed = seed;
          cfg.threads = threads;
          cfg.mcmc.n_iter = n_iter;
          cfg.mcmc.n_burnin = n_burnin;
          cfg.mcmc.thin = thin;
          CoverageResult result;
          {
            py::gil_scoped_release release;
            result = run_coverage_study(cfg);
          }
          py::dict out;
          for (const auto& pc : result.by_process) {
            py::dict per;
            per["coverage_markov_model"] = pc.coverage_markov;
            per["coverage_independent_model"] = pc.coverage_indep;
            per["n_failed"] = pc.n_failed;
            out[py::str(to_string(pc.process.kind))] = per;
          }
          return out;
        },
        py::arg("replicates") = 100, py::arg("length") = 100,
        py::arg("seed") = 1, py::arg("threads") = 0, py::arg("n_iter") = 12000,
        py::arg("n_burnin") = 2000, py::arg("thin") = 5);
}

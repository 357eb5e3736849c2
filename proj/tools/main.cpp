#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "markovgev/io.hpp"
#include "markovgev/logistic.hpp"
#include "markovgev/numeric.hpp"
#include "markovgev/simulate.hpp"

namespace {

namespace fs = std::filesystem;
using namespace markovgev;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

std::string default_outdir() {
  const char* env = std::getenv("MARKOVGEV_OUTDIR");
  return env && *env ? env : ".";
}

fs::path ensure_outdir(const std::string& dir) {
  fs::path p(dir);
  if (!p.empty()) fs::create_directories(p);
  return p;
}

void print_summary(const AnalysisReport& report) {
  std::printf("model %s  n=%zu  first_year=%d  seed=%llu\n", report.model.c_str(),
              report.n_observations, report.first_year,
              static_cast<unsigned long long>(report.mcmc.seed));
  std::printf("%-10s %10s %10s %10s %10s %10s %10s\n", "param", "mean", "2.5%",
              "5%", "50%", "95%", "97.5%");
  for (const auto& row : report.summary) {
    std::printf("%-10s %10.4f %10.4f %10.4f %10.4f %10.4f %10.4f\n",
                row.name.c_str(), row.mean, row.q025, row.q05, row.q50, row.q95,
                row.q975);
  }
  std::printf("DIC %.3f  (p_D %.3f, mean deviance %.3f)\n", report.dic.dic,
              report.dic.p_d, report.dic.mean_deviance);
  for (std::size_t i = 0; i < report.param_names.size(); ++i) {
    std::printf("%-10s Rhat %.4f  ESS %.0f\n", report.param_names[i].c_str(),
                report.rhat_values[i], report.ess_values[i]);
  }
  for (std::size_t i = 0; i < report.param_names.size(); ++i) {
    if (report.rhat_values[i] > 1.05) {
      std::fprintf(stderr,
                   "WARNING: Rhat for %s is %.4f (> 1.05); chains have not "
                   "mixed, increase --iters or --burnin\n",
                   report.param_names[i].c_str(), report.rhat_values[i]);
    }
  }
}

struct FitOptions {
  std::string data_path;
  std::string model = "M4";
  bool minima = false;
  bool first_chain_only = false;
  std::string year_col = "year";
  std::string value_col = "value";
  McmcConfig mcmc;
  std::string outdir = default_outdir();
};

int run_fit(const FitOptions& opt) {
  const IngestResult data =
      ingest_csv(opt.data_path, opt.minima, opt.year_col, opt.value_col);
  const ModelSpec spec = model_from_name(opt.model, opt.minima);

  const PriorSpec priors;
  const PosteriorDraws draws = mcmc_sample(data.series, spec, priors, opt.mcmc);
  const PosteriorDraws report_draws = opt.first_chain_only ? draws.chain_subset(0) : draws;

  AnalysisReport report;
  report.model = spec.name();
  report.spec = spec;
  report.priors = priors;
  report.mcmc = opt.mcmc;
  report.first_chain_only = opt.first_chain_only;
  report.data_path = data.path;
  report.data_hash = data.data_hash;
  report.n_observations = data.series.size();
  report.first_year = data.series.first_year;
  report.summary = posterior_summary(report_draws, data.series);
  report.param_names = draws.names;
  for (const auto& name : draws.names) {
    report.rhat_values.push_back(opt.mcmc.n_chains >= 2 ? rhat(draws, name) : 0.0);
    report.ess_values.push_back(ess(report_draws, name));
  }
  report.acceptance = draws.acceptance;
  report.dic = dic(data.series, spec, report_draws);
  report.chi = chi_profile(data.series.values);

  const fs::path out = ensure_outdir(opt.outdir);
  const std::string stem = "fit_" + spec.name();
  write_file((out / (stem + "_report.json")).string(), report_to_json(report));
  write_file((out / (stem + "_draws.csv")).string(), draws_csv(draws));
  print_summary(report);
  std::printf("wrote %s and %s\n", (out / (stem + "_report.json")).c_str(),
              (out / (stem + "_draws.csv")).c_str());
  return kExitOk;
}

struct ChiOptions {
  std::string data_path;
  bool minima = false;
  int lags = 5;
  std::vector<double> thresholds;
  std::string year_col = "year";
  std::string value_col = "value";
  std::string outdir = default_outdir();
};

int run_chi(const ChiOptions& opt) {
  const IngestResult data =
      ingest_csv(opt.data_path, opt.minima, opt.year_col, opt.value_col);
  std::vector<double> thresholds =
      opt.thresholds.empty() ? std::vector<double>{0.90, 0.925, 0.95} : opt.thresholds;
  const ChiProfile profile = chi_profile(data.series.values, opt.lags, thresholds);
  const std::string csv = chi_profile_csv(profile);
  std::fputs(csv.c_str(), stdout);
  const fs::path out = ensure_outdir(opt.outdir);
  write_file((out / "chi_profile.csv").string(), csv);
  nlohmann::json meta = {{"data", opt.data_path},
                         {"fnv1a_hash", data.data_hash},
                         {"minima", opt.minima},
                         {"lags", opt.lags},
                         {"thresholds", thresholds}};
  write_file((out / "chi_profile_meta.json").string(), meta.dump(2) + "\n");
  return kExitOk;
}

struct SimulateOptions {
  std::string process = "markov";
  long n = 100;
  std::uint64_t seed = 1;
  double alpha = 0.7;
  double mu = 0.0, sigma = 1.0, xi = -0.1;
  std::string outdir = default_outdir();
};

int run_simulate(const SimulateOptions& opt) {
  ProcessSpec process;
  process.kind = process_from_name(opt.process);
  process.marginal = GevParams{opt.mu, opt.sigma, opt.xi};
  process.alpha = opt.alpha;
  const SimResult sim = simulate(process, opt.n, opt.seed);

  const fs::path out = ensure_outdir(opt.outdir);
  const std::string name = "simulated_" + opt.process + ".csv";
  write_file((out / name).string(), series_csv(sim.series));
  nlohmann::json meta = {{"process", opt.process},
                         {"n", opt.n},
                         {"seed", opt.seed},
                         {"marginal", {{"mu", opt.mu}, {"sigma", opt.sigma}, {"xi", opt.xi}}}};
  if (process.kind == ProcessKind::MarkovGev) meta["alpha"] = opt.alpha;
  write_file((out / ("simulated_" + opt.process + "_meta.json")).string(),
             meta.dump(2) + "\n");
  std::printf("wrote %s (n=%ld, seed=%llu)\n", (out / name).c_str(), opt.n,
              static_cast<unsigned long long>(opt.seed));
  return kExitOk;
}

struct StudyOptions {
  std::string config_path;
  std::string what = "both";
  int replicates = -1;
  int chi_replicates = -1;
  int length = -1;
  long seed = -1;
  int threads = -1;
  std::string outdir = default_outdir();
};

int run_study(const StudyOptions& opt) {
  StudyConfig cfg = default_study_config();
  if (!opt.config_path.empty()) {
    cfg = study_config_from_json(read_file(opt.config_path));
  }
  if (opt.replicates > 0) cfg.n_replicates = opt.replicates;
  if (opt.chi_replicates > 0) cfg.chi_replicates = opt.chi_replicates;
  if (opt.length > 0) cfg.series_length = opt.length;
  if (opt.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(opt.seed);
  if (opt.threads >= 0) cfg.threads = opt.threads;
  cfg.validate();

  const fs::path out = ensure_outdir(opt.outdir);
  write_file((out / "study_config.json").string(), study_config_to_json(cfg));

  if (opt.what == "chi" || opt.what == "both") {
    const ChiTable table = run_chi_table(cfg);
    write_file((out / "chi_table.csv").string(), chi_table_csv(table));
    std::printf("chi table (%d replicates):\n%s", cfg.chi_replicates,
                chi_table_csv(table).c_str());
  }
  if (opt.what == "coverage" || opt.what == "both") {
    const CoverageResult result = run_coverage_study(cfg);
    write_file((out / "coverage_records.csv").string(), coverage_records_csv(result));
    write_file((out / "coverage_summary.json").string(), coverage_summary_json(result));
    write_file((out / "centered_intervals.csv").string(),
               centered_interval_csv(result));
    for (const auto& pc : result.by_process) {
      std::printf("%-12s coverage: markov model %.4f, independent model %.4f"
                  "  (failed %d/%zu)\n",
                  to_string(pc.process.kind).c_str(), pc.coverage_markov,
                  pc.coverage_indep, pc.n_failed, pc.records.size());
    }
  }
  std::printf("study outputs in %s\n", out.c_str());
  return kExitOk;
}

struct QuantileOptions {
  double prob = 0.95;
  double mu = 0.0, sigma = 1.0, xi = 0.0;
  double alpha = -1.0;  // <0 = marginal quantile
  double given = 0.0;
  bool has_given = false;
};

int run_quantile(const QuantileOptions& opt) {
  const GevParams marginal{opt.mu, opt.sigma, opt.xi};
  double q;
  if (opt.alpha > 0.0) {
    if (!opt.has_given) {
      throw std::invalid_argument("quantile: --alpha requires --given (the current observation)");
    }
    const double z = gev_to_frechet(opt.given, marginal);
    q = frechet_to_gev(conditional_quantile(opt.prob, z, opt.alpha), marginal);
  } else {
    q = gev_quantile(opt.prob, marginal);
  }
  std::printf("%.10g\n", q);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme-value analysis of serially dependent block maxima "
               "(first-order Markov GEV model with logistic dependence)"};
  app.require_subcommand(1);

  FitOptions fit;
  CLI::App* cmd_fit = app.add_subcommand(
      "fit", "Bayesian fit of one of the models M1-M4 to a station series");
  cmd_fit->add_option("--data", fit.data_path, "CSV with year,value columns")->required();
  cmd_fit->add_option("--model", fit.model, "M1|M2|M3|M4 (default M4)");
  cmd_fit->add_flag("--minima", fit.minima, "values are block minima; negate on ingest");
  cmd_fit->add_option("--seed", fit.mcmc.seed, "RNG seed");
  cmd_fit->add_option("--chains", fit.mcmc.n_chains, "number of chains (default 2)");
  cmd_fit->add_option("--iters", fit.mcmc.n_iter, "iterations per chain incl. burn-in");
  cmd_fit->add_option("--burnin", fit.mcmc.n_burnin, "burn-in iterations per chain");
  cmd_fit->add_option("--thin", fit.mcmc.thin, "keep every thin-th draw");
  cmd_fit->add_flag("--first-chain-only", fit.first_chain_only,
                    "summarize only the first chain (diagnostics still use all)");
  cmd_fit->add_option("--year-col", fit.year_col, "year column name");
  cmd_fit->add_option("--value-col", fit.value_col, "value column name");
  cmd_fit->add_option("--out", fit.outdir, "output directory (default $MARKOVGEV_OUTDIR or .)");

  ChiOptions chi;
  CLI::App* cmd_chi = app.add_subcommand(
      "chi", "Empirical tail-dependence profile of a station series");
  cmd_chi->add_option("--data", chi.data_path, "CSV with year,value columns")->required();
  cmd_chi->add_flag("--minima", chi.minima, "values are block minima; negate on ingest");
  cmd_chi->add_option("--lags", chi.lags, "maximum lag (default 5)");
  cmd_chi->add_option("--threshold", chi.thresholds,
                      "threshold quantile, repeatable (default 0.90 0.925 0.95)");
  cmd_chi->add_option("--year-col", chi.year_col, "year column name");
  cmd_chi->add_option("--value-col", chi.value_col, "value column name");
  cmd_chi->add_option("--out", chi.outdir, "output directory");

  SimulateOptions sim;
  CLI::App* cmd_sim = app.add_subcommand(
      "simulate", "Generate a series from one of the study processes");
  cmd_sim->add_option("--process", sim.process, "independent|markov|ma2");
  cmd_sim->add_option("--n", sim.n, "series length");
  cmd_sim->add_option("--seed", sim.seed, "RNG seed");
  cmd_sim->add_option("--alpha", sim.alpha, "dependence parameter (markov only)");
  cmd_sim->add_option("--mu", sim.mu, "marginal location");
  cmd_sim->add_option("--sigma", sim.sigma, "marginal scale");
  cmd_sim->add_option("--xi", sim.xi, "marginal shape");
  cmd_sim->add_option("--out", sim.outdir, "output directory");

  StudyOptions study;
  CLI::App* cmd_study = app.add_subcommand(
      "study", "Coverage study and replicate-averaged chi tables");
  cmd_study->add_option("--config", study.config_path, "StudyConfig JSON file");
  cmd_study->add_option("--what", study.what, "coverage|chi|both (default both)")
      ->check(CLI::IsMember({"coverage", "chi", "both"}));
  cmd_study->add_option("--replicates", study.replicates, "coverage replicates per process");
  cmd_study->add_option("--chi-replicates", study.chi_replicates, "chi-table replicates");
  cmd_study->add_option("--length", study.length, "series length");
  cmd_study->add_option("--seed", study.seed, "master seed");
  cmd_study->add_option("--threads", study.threads, "worker threads (0 = all cores)");
  cmd_study->add_option("--out", study.outdir, "output directory");

  QuantileOptions quant;
  CLI::App* cmd_quant = app.add_subcommand(
      "quantile", "GEV quantile, or the conditional next-step quantile when "
                  "--alpha and --given are set (all on the analysis scale)");
  cmd_quant->add_option("--prob", quant.prob, "non-exceedance probability (default 0.95)");
  cmd_quant->add_option("--mu", quant.mu, "location")->required();
  cmd_quant->add_option("--sigma", quant.sigma, "scale")->required();
  cmd_quant->add_option("--xi", quant.xi, "shape")->required();
  cmd_quant->add_option("--alpha", quant.alpha, "logistic dependence parameter");
  cmd_quant->add_option("--given", quant.given, "current observation (data scale)")
      ->each([&](const std::string&) { quant.has_given = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_fit->parsed()) return run_fit(fit);
    if (cmd_chi->parsed()) return run_chi(chi);
    if (cmd_sim->parsed()) return run_simulate(sim);
    if (cmd_study->parsed()) return run_study(study);
    if (cmd_quant->parsed()) return run_quantile(quant);
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}

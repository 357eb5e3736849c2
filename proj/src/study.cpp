#include "markovgev/study.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <thread>

#include "markovgev/chi.hpp"
#include "markovgev/rng.hpp"

namespace markovgev {

namespace {

// Stream labels so the simulator, the two fits, and the chi table never
// share random numbers.
constexpr std::uint64_t kStreamSimulate = 0x51;
constexpr std::uint64_t kStreamFitIndep = 0xF1;
constexpr std::uint64_t kStreamFitMarkov = 0xF3;
constexpr std::uint64_t kStreamChi = 0xC1;

void run_parallel(int n_tasks, int threads, const std::function<void(int)>& task) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, n_tasks);
  if (threads <= 1) {
    for (int i = 0; i < n_tasks; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) {
        task(i);
      }
    });
  }
  for (auto& t : workers) t.join();
}

struct IntervalOutcome {
  double lower = 0.0, upper = 0.0;
  bool hit = false;
};

IntervalOutcome score_fit(const MaximaSeries& series, const ModelSpec& spec,
                          const McmcConfig& cfg, double ci_level, double truth) {
  const PosteriorDraws draws = mcmc_sample(series, spec, PriorSpec{}, cfg);
  std::vector<double> q(draws.n_rows());
  std::vector<double> theta(draws.n_cols);
  for (std::size_t r = 0; r < draws.n_rows(); ++r) {
    for (std::size_t j = 0; j < draws.n_cols; ++j) theta[j] = draws.at(r, j);
    q[r] = conditional_q95_next(series, unpack_params(spec, theta), spec);
  }
  const double tail = 0.5 * (1.0 - ci_level);
  IntervalOutcome out;
  out.lower = quantile_type7(q, tail);
  out.upper = quantile_type7(q, 1.0 - tail);
  out.hit = out.lower <= truth && truth <= out.upper;
  return out;
}

}  // namespace

std::vector<ProcessSpec> StudyConfig::effective_processes() const {
  if (!processes.empty()) return processes;
  ProcessSpec indep{ProcessKind::IndependentGev, GevParams{0.0, 1.0, -0.1}, 0.7};
  ProcessSpec markov{ProcessKind::MarkovGev, GevParams{0.0, 1.0, -0.1}, 0.7};
  ProcessSpec ma2{ProcessKind::Ma2Gev, GevParams{0.0, 1.0, -0.1}, 0.7};
  return {indep, markov, ma2};
}

void StudyConfig::validate() const {
  if (n_replicates < 1 || chi_replicates < 1) {
    throw std::invalid_argument("study: replicate counts must be positive");
  }
  if (series_length < 2) {
    throw std::invalid_argument("study: series_length must be >= 2");
  }
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw std::invalid_argument("study: ci_level must be in (0,1)");
  }
  mcmc.validate();
}

StudyConfig default_study_config() {
  StudyConfig cfg;
  cfg.mcmc.n_chains = 1;
  cfg.mcmc.n_iter = 12000;
  cfg.mcmc.n_burnin = 2000;
  cfg.mcmc.thin = 5;  // (12000 - 2000) / 5 = 2000 retained draws
  return cfg;
}

CoverageResult run_coverage_study(const StudyConfig& cfg) {
  cfg.validate();
  CoverageResult result;
  result.config = cfg;
  const auto processes = cfg.effective_processes();
  const ModelSpec indep_spec = model_from_name("M1");
  const ModelSpec markov_spec = model_from_name("M3");

  for (std::size_t pi = 0; pi < processes.size(); ++pi) {
    ProcessCoverage pc;
    pc.process = processes[pi];
    pc.records.resize(cfg.n_replicates);

    run_parallel(cfg.n_replicates, cfg.threads, [&](int r) {
      ReplicateRecord& rec = pc.records[r];
      rec.replicate = r;
      try {
        const SimResult sim =
            simulate(pc.process, cfg.series_length,
                     derive_seed(cfg.master_seed, pi, r, kStreamSimulate));
        rec.true_q = true_conditional_q95(pc.process, sim);

        McmcConfig fit_cfg = cfg.mcmc;
        fit_cfg.seed = derive_seed(cfg.master_seed, pi, r, kStreamFitIndep);
        const IntervalOutcome indep =
            score_fit(sim.series, indep_spec, fit_cfg, cfg.ci_level, rec.true_q);
        fit_cfg.seed = derive_seed(cfg.master_seed, pi, r, kStreamFitMarkov);
        const IntervalOutcome markov =
            score_fit(sim.series, markov_spec, fit_cfg, cfg.ci_level, rec.true_q);

        rec.indep_lower = indep.lower;
        rec.indep_upper = indep.upper;
        rec.indep_hit = indep.hit;
        rec.markov_lower = markov.lower;
        rec.markov_upper = markov.upper;
        rec.markov_hit = markov.hit;
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.failure = e.what();
      }
    });

    long ok = 0;
    for (const auto& rec : pc.records) {
      if (rec.failed) {
        ++pc.n_failed;
        continue;
      }
      ++ok;
      pc.coverage_indep += rec.indep_hit ? 1.0 : 0.0;
      pc.coverage_markov += rec.markov_hit ? 1.0 : 0.0;
      pc.width_mean_indep += rec.indep_upper - rec.indep_lower;
      pc.width_mean_markov += rec.markov_upper - rec.markov_lower;
    }
    if (ok > 0) {
      pc.coverage_indep /= static_cast<double>(ok);
      pc.coverage_markov /= static_cast<double>(ok);
      pc.width_mean_indep /= static_cast<double>(ok);
      pc.width_mean_markov /= static_cast<double>(ok);
    }
    result.by_process.push_back(std::move(pc));
  }
  return result;
}

ChiTable run_chi_table(const StudyConfig& cfg) {
  cfg.validate();
  ChiTable table;
  table.config = cfg;
  const auto processes = cfg.effective_processes();
  const std::size_t n_cells = cfg.chi_max_lag * cfg.chi_thresholds.size();

  for (std::size_t pi = 0; pi < processes.size(); ++pi) {
    ChiTableEntry entry;
    entry.process = processes[pi];
    entry.thresholds = cfg.chi_thresholds;
    for (int k = 1; k <= cfg.chi_max_lag; ++k) entry.lags.push_back(k);
    entry.mean_chi.assign(n_cells, 0.0);
    entry.n_defined.assign(n_cells, 0);

    std::vector<std::vector<double>> sums(cfg.chi_replicates,
                                          std::vector<double>(n_cells, 0.0));
    std::vector<std::vector<int>> defined(cfg.chi_replicates,
                                          std::vector<int>(n_cells, 0));
    run_parallel(cfg.chi_replicates, cfg.threads, [&](int r) {
      const SimResult sim = simulate(processes[pi], cfg.series_length,
                                     derive_seed(cfg.master_seed, pi, r, kStreamChi));
      const ChiProfile profile =
          chi_profile(sim.series.values, cfg.chi_max_lag, cfg.chi_thresholds);
      for (std::size_t c = 0; c < n_cells; ++c) {
        if (profile.cells[c].estimate) {
          sums[r][c] = *profile.cells[c].estimate;
          defined[r][c] = 1;
        }
      }
    });
    for (int r = 0; r < cfg.chi_replicates; ++r) {
      for (std::size_t c = 0; c < n_cells; ++c) {
        entry.mean_chi[c] += sums[r][c];
        entry.n_defined[c] += defined[r][c];
      }
    }
    for (std::size_t c = 0; c < n_cells; ++c) {
      if (entry.n_defined[c] > 0) {
        entry.mean_chi[c] /= static_cast<double>(entry.n_defined[c]);
      }
    }
    table.by_process.push_back(std::move(entry));
  }
  return table;
}

std::string coverage_records_csv(const CoverageResult& result) {
  std::string out =
      "process,replicate,failed,true_q,indep_lower,indep_upper,indep_hit,"
      "markov_lower,markov_upper,markov_hit\n";
  char buf[320];
  for (const auto& pc : result.by_process) {
    const std::string name = to_string(pc.process.kind);
    for (const auto& rec : pc.records) {
      if (rec.failed) {
        std::snprintf(buf, sizeof(buf), "%s,%d,1,,,,,,,\n", name.c_str(),
                      rec.replicate);
      } else {
        std::snprintf(buf, sizeof(buf),
                      "%s,%d,0,%.10g,%.10g,%.10g,%d,%.10g,%.10g,%d\n",
                      name.c_str(), rec.replicate, rec.true_q, rec.indep_lower,
                      rec.indep_upper, rec.indep_hit ? 1 : 0, rec.markov_lower,
                      rec.markov_upper, rec.markov_hit ? 1 : 0);
      }
      out += buf;
    }
  }
  return out;
}

std::string chi_table_csv(const ChiTable& table) {
  std::string out = "process,lag,threshold,mean_chi,n_defined\n";
  char buf[160];
  for (const auto& entry : table.by_process) {
    for (std::size_t i = 0; i < entry.lags.size(); ++i) {
      for (std::size_t j = 0; j < entry.thresholds.size(); ++j) {
        const std::size_t c = i * entry.thresholds.size() + j;
        if (entry.n_defined[c] > 0) {
          std::snprintf(buf, sizeof(buf), "%s,%d,%.6g,%.10g,%d\n",
                        to_string(entry.process.kind).c_str(), entry.lags[i],
                        entry.thresholds[j], entry.mean_chi[c], entry.n_defined[c]);
        } else {
          std::snprintf(buf, sizeof(buf), "%s,%d,%.6g,,0\n",
                        to_string(entry.process.kind).c_str(), entry.lags[i],
                        entry.thresholds[j]);
        }
        out += buf;
      }
    }
  }
  return out;
}

std::string centered_interval_csv(const CoverageResult& result, int first_k) {
  std::string out = "process,model,replicate,centered_lower,centered_upper\n";
  char buf[200];
  for (const auto& pc : result.by_process) {
    const std::string name = to_string(pc.process.kind);
    int emitted = 0;
    for (const auto& rec : pc.records) {
      if (emitted >= first_k) break;
      if (rec.failed) continue;
      ++emitted;
      std::snprintf(buf, sizeof(buf), "%s,independent,%d,%.10g,%.10g\n",
                    name.c_str(), rec.replicate, rec.indep_lower - rec.true_q,
                    rec.indep_upper - rec.true_q);
      out += buf;
      std::snprintf(buf, sizeof(buf), "%s,markov,%d,%.10g,%.10g\n", name.c_str(),
                    rec.replicate, rec.markov_lower - rec.true_q,
                    rec.markov_upper - rec.true_q);
      out += buf;
    }
  }
  return out;
}

}  // namespace markovgev

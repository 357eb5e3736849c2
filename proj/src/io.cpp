#include "markovgev/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace markovgev {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

json spec_to_json(const ModelSpec& spec) {
  return {{"trend", spec.trend},
          {"markov", spec.markov},
          {"negate_minima", spec.negate_minima}};
}

ModelSpec spec_from_json(const json& j) {
  ModelSpec spec;
  spec.trend = j.at("trend").get<bool>();
  spec.markov = j.at("markov").get<bool>();
  spec.negate_minima = j.at("negate_minima").get<bool>();
  return spec;
}

json priors_to_json(const PriorSpec& p) {
  return {{"mu0_sd", p.mu0_sd},         {"mu1_sd", p.mu1_sd},
          {"log_sigma_sd", p.log_sigma_sd}, {"xi_sd", p.xi_sd},
          {"xi_lower", p.xi_lower},     {"xi_upper", p.xi_upper},
          {"alpha_a", p.alpha_a},       {"alpha_b", p.alpha_b}};
}

PriorSpec priors_from_json(const json& j) {
  PriorSpec p;
  p.mu0_sd = j.at("mu0_sd").get<double>();
  p.mu1_sd = j.at("mu1_sd").get<double>();
  p.log_sigma_sd = j.at("log_sigma_sd").get<double>();
  p.xi_sd = j.at("xi_sd").get<double>();
  p.xi_lower = j.at("xi_lower").get<double>();
  p.xi_upper = j.at("xi_upper").get<double>();
  p.alpha_a = j.at("alpha_a").get<double>();
  p.alpha_b = j.at("alpha_b").get<double>();
  return p;
}

json mcmc_to_json(const McmcConfig& cfg) {
  return {{"n_chains", cfg.n_chains},   {"n_iter", cfg.n_iter},
          {"n_burnin", cfg.n_burnin},   {"thin", cfg.thin},
          {"seed", cfg.seed},           {"target_accept", cfg.target_accept},
          {"max_init_tries", cfg.max_init_tries}};
}

McmcConfig mcmc_from_json(const json& j) {
  McmcConfig cfg;
  cfg.n_chains = j.at("n_chains").get<int>();
  cfg.n_iter = j.at("n_iter").get<long>();
  cfg.n_burnin = j.at("n_burnin").get<long>();
  cfg.thin = j.at("thin").get<long>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.target_accept = j.value("target_accept", 0.30);
  cfg.max_init_tries = j.value("max_init_tries", 200);
  return cfg;
}

json chi_to_json(const ChiProfile& profile) {
  json cells = json::array();
  for (std::size_t i = 0; i < profile.lags.size(); ++i) {
    for (std::size_t j = 0; j < profile.thresholds.size(); ++j) {
      const ChiCell& c = profile.cell(i, j);
      cells.push_back({{"lag", profile.lags[i]},
                       {"threshold", profile.thresholds[j]},
                       {"chi_hat", c.estimate ? json(*c.estimate) : json(nullptr)},
                       {"n_exceed", c.n_exceed}});
    }
  }
  return {{"lags", profile.lags}, {"thresholds", profile.thresholds}, {"cells", cells}};
}

ChiProfile chi_from_json(const json& j) {
  ChiProfile profile;
  profile.lags = j.at("lags").get<std::vector<int>>();
  profile.thresholds = j.at("thresholds").get<std::vector<double>>();
  for (const auto& cell : j.at("cells")) {
    ChiCell c;
    if (!cell.at("chi_hat").is_null()) c.estimate = cell.at("chi_hat").get<double>();
    c.n_exceed = cell.at("n_exceed").get<long>();
    profile.cells.push_back(c);
  }
  return profile;
}

json summary_to_json(const std::vector<SummaryRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"name", r.name}, {"mean", r.mean},
                   {"q2.5", r.q025},  {"q5", r.q05},
                   {"q50", r.q50},    {"q95", r.q95},
                   {"q97.5", r.q975}});
  }
  return out;
}

std::vector<SummaryRow> summary_from_json(const json& j) {
  std::vector<SummaryRow> rows;
  for (const auto& e : j) {
    SummaryRow r;
    r.name = e.at("name").get<std::string>();
    r.mean = e.at("mean").get<double>();
    r.q025 = e.at("q2.5").get<double>();
    r.q05 = e.at("q5").get<double>();
    r.q50 = e.at("q50").get<double>();
    r.q95 = e.at("q95").get<double>();
    r.q975 = e.at("q97.5").get<double>();
    rows.push_back(r);
  }
  return rows;
}

GevParams gev_from_json(const json& j) {
  return GevParams{j.at("mu").get<double>(), j.at("sigma").get<double>(),
                   j.at("xi").get<double>()};
}

json gev_to_json(const GevParams& g) {
  return {{"mu", g.mu}, {"sigma", g.sigma}, {"xi", g.xi}};
}

}  // namespace

std::uint64_t fnv1a_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
}

IngestResult ingest_records(std::vector<StationRecord> records, bool negate,
                            const std::string& origin) {
  if (records.size() < 2) {
    throw DataError(origin + ": need at least 2 records, got " +
                    std::to_string(records.size()));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const StationRecord& a, const StationRecord& b) {
                     return a.year < b.year;
                   });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].year == records[i - 1].year) {
      throw DataError(origin + ": duplicate year " + std::to_string(records[i].year));
    }
    if (records[i].year != records[i - 1].year + 1) {
      throw DataError(origin + ": missing year(s) between " +
                      std::to_string(records[i - 1].year) + " and " +
                      std::to_string(records[i].year));
    }
  }
  IngestResult out;
  out.series.negated = negate;
  out.series.first_year = records.front().year;
  out.series.values.reserve(records.size());
  for (const auto& rec : records) {
    out.series.values.push_back(negate ? -rec.value : rec.value);
  }
  out.records = std::move(records);
  out.path = origin;
  return out;
}

IngestResult ingest_csv(const std::string& path, bool negate,
                        const std::string& year_column,
                        const std::string& value_column) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  int year_idx = -1, value_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == year_column) year_idx = static_cast<int>(i);
    if (header[i] == value_column) value_idx = static_cast<int>(i);
  }
  if (year_idx < 0 || value_idx < 0) {
    throw DataError(path + ": header must contain columns '" + year_column +
                    "' and '" + value_column + "' (got: " + line + ")");
  }

  std::vector<StationRecord> records;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() <= static_cast<std::size_t>(std::max(year_idx, value_idx))) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected at least " +
                      std::to_string(std::max(year_idx, value_idx) + 1) + " fields");
    }
    StationRecord rec;
    try {
      std::size_t pos = 0;
      rec.year = std::stoi(fields[year_idx], &pos);
      if (pos != fields[year_idx].size()) throw std::invalid_argument("trailing");
      rec.value = std::stod(fields[value_idx], &pos);
      if (pos != fields[value_idx].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed row '" + line + "'");
    }
    records.push_back(rec);
  }
  IngestResult out = ingest_records(std::move(records), negate, path);
  out.data_hash = fnv1a_hash(bytes);
  out.path = path;
  return out;
}

std::string series_csv(const std::vector<StationRecord>& records) {
  std::string out = "year,value\n";
  char buf[64];
  for (const auto& rec : records) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g\n", rec.year, rec.value);
    out += buf;
  }
  return out;
}

std::string series_csv(const MaximaSeries& series, bool undo_negation) {
  std::vector<StationRecord> records;
  records.reserve(series.size());
  const double sign = (series.negated && undo_negation) ? -1.0 : 1.0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    records.push_back({series.first_year + static_cast<int>(t),
                       sign * series.values[t]});
  }
  return series_csv(records);
}

std::string report_to_json(const AnalysisReport& report) {
  json j;
  j["model"] = report.model;
  j["spec"] = spec_to_json(report.spec);
  j["priors"] = priors_to_json(report.priors);
  j["mcmc"] = mcmc_to_json(report.mcmc);
  j["first_chain_only"] = report.first_chain_only;
  j["data"] = {{"path", report.data_path},
               {"fnv1a_hash", report.data_hash},
               {"n", report.n_observations},
               {"first_year", report.first_year}};
  j["summary"] = summary_to_json(report.summary);
  j["diagnostics"] = {{"params", report.param_names},
                      {"rhat", report.rhat_values},
                      {"ess", report.ess_values},
                      {"acceptance", report.acceptance}};
  j["dic"] = {{"dic", report.dic.dic},
              {"p_d", report.dic.p_d},
              {"mean_deviance", report.dic.mean_deviance}};
  j["chi_profile"] = chi_to_json(report.chi);
  return j.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& json_text) {
  const json j = json::parse(json_text);
  AnalysisReport report;
  report.model = j.at("model").get<std::string>();
  report.spec = spec_from_json(j.at("spec"));
  report.priors = priors_from_json(j.at("priors"));
  report.mcmc = mcmc_from_json(j.at("mcmc"));
  report.first_chain_only = j.at("first_chain_only").get<bool>();
  report.data_path = j.at("data").at("path").get<std::string>();
  report.data_hash = j.at("data").at("fnv1a_hash").get<std::uint64_t>();
  report.n_observations = j.at("data").at("n").get<std::size_t>();
  report.first_year = j.at("data").at("first_year").get<int>();
  report.summary = summary_from_json(j.at("summary"));
  report.param_names = j.at("diagnostics").at("params").get<std::vector<std::string>>();
  report.rhat_values = j.at("diagnostics").at("rhat").get<std::vector<double>>();
  report.ess_values = j.at("diagnostics").at("ess").get<std::vector<double>>();
  report.acceptance =
      j.at("diagnostics").at("acceptance").get<std::vector<std::vector<double>>>();
  report.dic.dic = j.at("dic").at("dic").get<double>();
  report.dic.p_d = j.at("dic").at("p_d").get<double>();
  report.dic.mean_deviance = j.at("dic").at("mean_deviance").get<double>();
  report.chi = chi_from_json(j.at("chi_profile"));
  return report;
}

std::string draws_csv(const PosteriorDraws& draws) {
  std::string out = "chain,iteration";
  for (const auto& name : draws.names) out += "," + name;
  out += "\n";
  char buf[64];
  std::vector<long> per_chain_counter;
  for (std::size_t r = 0; r < draws.n_rows(); ++r) {
    const int c = draws.chain[r];
    if (per_chain_counter.size() <= static_cast<std::size_t>(c)) {
      per_chain_counter.resize(c + 1, 0);
    }
    std::snprintf(buf, sizeof(buf), "%d,%ld", c, ++per_chain_counter[c]);
    out += buf;
    for (std::size_t j = 0; j < draws.n_cols; ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", draws.at(r, j));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::string study_config_to_json(const StudyConfig& cfg) {
  json procs = json::array();
  for (const auto& p : cfg.effective_processes()) {
    json e = {{"kind", to_string(p.kind)}, {"marginal", gev_to_json(p.marginal)}};
    if (p.kind == ProcessKind::MarkovGev) e["alpha"] = p.alpha;
    procs.push_back(e);
  }
  json j;
  j["processes"] = procs;
  j["n_replicates"] = cfg.n_replicates;
  j["series_length"] = cfg.series_length;
  j["mcmc"] = mcmc_to_json(cfg.mcmc);
  j["ci_level"] = cfg.ci_level;
  j["master_seed"] = cfg.master_seed;
  j["threads"] = cfg.threads;
  j["chi_replicates"] = cfg.chi_replicates;
  j["chi_max_lag"] = cfg.chi_max_lag;
  j["chi_thresholds"] = cfg.chi_thresholds;
  return j.dump(2) + "\n";
}

StudyConfig study_config_from_json(const std::string& json_text) {
  const json j = json::parse(json_text);
  StudyConfig cfg = default_study_config();
  if (j.contains("processes")) {
    cfg.processes.clear();
    for (const auto& e : j.at("processes")) {
      ProcessSpec p;
      p.kind = process_from_name(e.at("kind").get<std::string>());
      if (e.contains("marginal")) p.marginal = gev_from_json(e.at("marginal"));
      if (e.contains("alpha")) p.alpha = e.at("alpha").get<double>();
      cfg.processes.push_back(p);
    }
  }
  cfg.n_replicates = j.value("n_replicates", cfg.n_replicates);
  cfg.series_length = j.value("series_length", cfg.series_length);
  if (j.contains("mcmc")) cfg.mcmc = mcmc_from_json(j.at("mcmc"));
  cfg.ci_level = j.value("ci_level", cfg.ci_level);
  cfg.master_seed = j.value("master_seed", cfg.master_seed);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.chi_replicates = j.value("chi_replicates", cfg.chi_replicates);
  cfg.chi_max_lag = j.value("chi_max_lag", cfg.chi_max_lag);
  if (j.contains("chi_thresholds")) {
    cfg.chi_thresholds = j.at("chi_thresholds").get<std::vector<double>>();
  }
  return cfg;
}

std::string coverage_summary_json(const CoverageResult& result) {
  json rows = json::array();
  for (const auto& pc : result.by_process) {
    rows.push_back({{"process", to_string(pc.process.kind)},
                    {"coverage_markov_model", pc.coverage_markov},
                    {"coverage_independent_model", pc.coverage_indep},
                    {"width_mean_markov_model", pc.width_mean_markov},
                    {"width_mean_independent_model", pc.width_mean_indep},
                    {"n_replicates", pc.records.size()},
                    {"n_failed", pc.n_failed}});
  }
  json j;
  j["coverage"] = rows;
  j["config"] = json::parse(study_config_to_json(result.config));
  return j.dump(2) + "\n";
}

}  // namespace markovgev

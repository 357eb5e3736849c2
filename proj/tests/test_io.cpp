#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "markovgev/io.hpp"
#include "markovgev/simulate.hpp"

using namespace markovgev;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("markovgev_io_test_" + std::to_string(counter++) + ".csv");
    std::ofstream(path) << content;
  }
  ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

}  // namespace

TEST_CASE("ingest negates minima and assigns the time index") {
  TempFile f("year,value\n1947,-25.3\n1948,-28.1\n");
  const IngestResult r = ingest_csv(f.path.string(), true);
  REQUIRE(r.series.size() == 2);
  CHECK(r.series.values[0] == 25.3);
  CHECK(r.series.values[1] == 28.1);
  CHECK(r.series.negated);
  CHECK(r.series.first_year == 1947);
  CHECK(r.records[0].year == 1947);
  CHECK(r.records[0].value == -25.3);
}

TEST_CASE("ingest sorts rows by year") {
  TempFile f("year,value\n1949,3\n1947,1\n1948,2\n");
  const IngestResult r = ingest_csv(f.path.string(), false);
  CHECK(r.series.values == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("ingest errors carry the reason") {
  TempFile dup("year,value\n1947,1\n1947,2\n1948,3\n");
  CHECK_THROWS_WITH_AS(ingest_csv(dup.path.string(), false),
                       doctest::Contains("duplicate year 1947"), DataError);

  TempFile gap("year,value\n1947,1\n1949,2\n");
  CHECK_THROWS_WITH_AS(ingest_csv(gap.path.string(), false),
                       doctest::Contains("missing year"), DataError);

  TempFile malformed("year,value\n1947,1\nnineteen,2\n");
  CHECK_THROWS_WITH_AS(ingest_csv(malformed.path.string(), false),
                       doctest::Contains(":3:"), DataError);

  TempFile short_file("year,value\n1947,1\n");
  CHECK_THROWS_AS(ingest_csv(short_file.path.string(), false), DataError);

  TempFile bad_header("time,temp\n1947,1\n1948,2\n");
  CHECK_THROWS_AS(ingest_csv(bad_header.path.string(), false), DataError);
  // a header mapping makes the same file ingestible
  const IngestResult mapped =
      ingest_csv(bad_header.path.string(), false, "time", "temp");
  CHECK(mapped.series.size() == 2);

  CHECK_THROWS_AS(ingest_csv("/nonexistent/path.csv", false), DataError);
}

TEST_CASE("ingest then export then ingest is the identity") {
  TempFile f("year,value\n1990,-3.25\n1991,0.5\n1992,12.125\n");
  const IngestResult first = ingest_csv(f.path.string(), false);
  TempFile exported(series_csv(first.records));
  const IngestResult second = ingest_csv(exported.path.string(), false);
  REQUIRE(first.records.size() == second.records.size());
  for (std::size_t i = 0; i < first.records.size(); ++i) {
    CHECK(first.records[i].year == second.records[i].year);
    CHECK(first.records[i].value == second.records[i].value);
  }
}

TEST_CASE("series export undoes the minima negation") {
  TempFile f("year,value\n1947,-25.3\n1948,-28.1\n");
  const IngestResult r = ingest_csv(f.path.string(), true);
  const std::string out = series_csv(r.series);
  CHECK(out.find("1947,-25.3") != std::string::npos);
  CHECK(out.find("1948,-28.1") != std::string::npos);
}

TEST_CASE("file hash is stable and content sensitive") {
  CHECK(fnv1a_hash("abc") == fnv1a_hash("abc"));
  CHECK(fnv1a_hash("abc") != fnv1a_hash("abd"));
}

TEST_CASE("analysis report roundtrips through json") {
  const SimResult sim = sim_markov_gev(40, {0, 1, -0.1}, 0.7, 55);
  McmcConfig cfg;
  cfg.n_chains = 2;
  cfg.n_iter = 2000;
  cfg.n_burnin = 500;
  cfg.thin = 5;
  cfg.seed = 12;
  const ModelSpec spec = model_from_name("M3");
  const PosteriorDraws draws = mcmc_sample(sim.series, spec, {}, cfg);

  AnalysisReport report;
  report.model = spec.name();
  report.spec = spec;
  report.mcmc = cfg;
  report.data_path = "synthetic";
  report.data_hash = 42;
  report.n_observations = sim.series.size();
  report.first_year = 1;
  report.summary = posterior_summary(draws, sim.series);
  report.param_names = draws.names;
  for (const auto& name : draws.names) {
    report.rhat_values.push_back(rhat(draws, name));
    report.ess_values.push_back(ess(draws, name));
  }
  report.acceptance = draws.acceptance;
  report.dic = dic(sim.series, spec, draws);
  report.chi = chi_profile(sim.series.values);

  const std::string text = report_to_json(report);
  const AnalysisReport back = report_from_json(text);
  CHECK(back.model == report.model);
  CHECK(back.spec.markov == report.spec.markov);
  CHECK(back.mcmc.seed == report.mcmc.seed);
  CHECK(back.data_hash == report.data_hash);
  CHECK(back.summary.size() == report.summary.size());
  for (std::size_t i = 0; i < report.summary.size(); ++i) {
    CHECK(back.summary[i].name == report.summary[i].name);
    CHECK(back.summary[i].mean == report.summary[i].mean);
    CHECK(back.summary[i].q975 == report.summary[i].q975);
  }
  CHECK(back.dic.dic == report.dic.dic);
  CHECK(back.chi.cells.size() == report.chi.cells.size());
  // serialize -> parse -> serialize is a fixed point
  CHECK(report_to_json(back) == text);
}

TEST_CASE("draws csv carries chain and iteration labels") {
  const SimResult sim = sim_markov_gev(30, {0, 1, -0.1}, 0.7, 66);
  McmcConfig cfg;
  cfg.n_chains = 2;
  cfg.n_iter = 600;
  cfg.n_burnin = 100;
  cfg.thin = 5;
  const PosteriorDraws draws = mcmc_sample(sim.series, model_from_name("M1"), {}, cfg);
  const std::string csv = draws_csv(draws);
  CHECK(csv.find("chain,iteration,mu0,log_sigma,xi") == 0);
  CHECK(csv.find("\n0,1,") != std::string::npos);
  CHECK(csv.find("\n1,1,") != std::string::npos);
}

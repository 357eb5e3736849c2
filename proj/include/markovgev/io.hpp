#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "markovgev/chi.hpp"
#include "markovgev/inference.hpp"
#include "markovgev/model.hpp"
#include "markovgev/study.hpp"

namespace markovgev {

// Malformed input data; CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StationRecord {
  int year = 0;
  double value = 0.0;
};

struct IngestResult {
  std::vector<StationRecord> records;  // sorted by year
  MaximaSeries series;
  std::uint64_t data_hash = 0;  // FNV-1a of the raw file bytes
  std::string path;
};

// Reads a header CSV with a year column and a value column (default names
// "year" and "value", remappable), sorts by year, validates that years are
// unique and gapless, and negates once when the file holds minima. Errors
// carry the offending line number.
IngestResult ingest_csv(const std::string& path, bool negate,
                        const std::string& year_column = "year",
                        const std::string& value_column = "value");

IngestResult ingest_records(std::vector<StationRecord> records, bool negate,
                            const std::string& origin = "");

std::string series_csv(const std::vector<StationRecord>& records);
// Series written as year,value rows; years are t + first_year - 1 so a
// simulated series exports with year = 1..n by default.
std::string series_csv(const MaximaSeries& series, bool undo_negation = true);

std::uint64_t fnv1a_hash(const std::string& bytes);
std::string read_file(const std::string& path);   // throws DataError
void write_file(const std::string& path, const std::string& content);

// Everything a fit produces, self-describing enough that re-running from
// the embedded configuration and seed reproduces the numeric payload.
struct AnalysisReport {
  std::string model;
  ModelSpec spec;
  PriorSpec priors;
  McmcConfig mcmc;
  bool first_chain_only = false;
  std::string data_path;
  std::uint64_t data_hash = 0;
  std::size_t n_observations = 0;
  int first_year = 1;
  std::vector<SummaryRow> summary;
  std::vector<std::string> param_names;
  std::vector<double> rhat_values;  // aligned with param_names
  std::vector<double> ess_values;
  std::vector<std::vector<double>> acceptance;  // per chain, per coordinate
  DicResult dic;
  ChiProfile chi;
};

std::string report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const std::string& json_text);

std::string draws_csv(const PosteriorDraws& draws);

// StudyConfig as a JSON document (the cmd_study --config format).
std::string study_config_to_json(const StudyConfig& cfg);
StudyConfig study_config_from_json(const std::string& json_text);

std::string coverage_summary_json(const CoverageResult& result);

}  // namespace markovgev

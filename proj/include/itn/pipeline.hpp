#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "itn/analysis.hpp"
#include "itn/sampler.hpp"

namespace itn {

enum class MethodChoice { direct, metropolis, both };

MethodChoice parse_method(const std::string& text);
std::string to_string(MethodChoice method);

/// Parses "a..b" (inclusive), "a,b,c" or a single year. Throws ConfigError.
std::vector<int> parse_years(const std::string& text);

/// Everything a pipeline command needs. Defaults follow the dataset's
/// reporting floor and the standard binning filters.
struct RunConfig {
  std::filesystem::path flows_path;
  std::filesystem::path gdp_path;
  std::vector<int> years;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  MethodChoice method = MethodChoice::direct;
  int samples = 1;  // direct samples per year
  ChainConfig chain;
  FrFilters filters{1e-4, 1000};
  double censor_threshold = kReportingFloorMusd;
  std::size_t hist_bins = 30;
  std::size_t cloud_bins = 20;
  double ks_alpha = 0.01;

  /// Throws ConfigError on inconsistent values (empty years, bad chain...).
  void validate() const;
};

/// Reads a JSON config. Unknown keys are rejected. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);

/// Command outcome messages go to `out`; recoverable problems to `warn`.
struct CommandIo {
  std::ostream& out;
  std::ostream& warn;
};

/// Parses inputs and writes snapshot-<year>.csv + countries-<year>.csv per year.
void cmd_ingest(const RunConfig& config, const CommandIo& io);
/// Writes params-<year>.csv per year and prints the fit residual.
void cmd_fit(const RunConfig& config, const CommandIo& io);
/// Writes direct samples and/or the Metropolis chain trace per year.
void cmd_simulate(const RunConfig& config, const CommandIo& io);
/// Writes strength, cloud, histogram and fluctuation-response tables.
void cmd_analyze(const RunConfig& config, const CommandIo& io);

}  // namespace itn

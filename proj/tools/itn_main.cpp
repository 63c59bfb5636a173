// itn: ingest, fit, simulate and analyze yearly trade-network snapshots.

#include <CLI11.hpp>
#include <iostream>

#include "itn/error.hpp"
#include "itn/pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Overrides {
  std::string config;
  std::string years;
  std::string method;
  std::string output;
  std::string flows;
  std::string gdp;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
};

void add_common(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config, "JSON run configuration");
  cmd.add_option("--years", o.years, "Years as a..b or a comma list");
  cmd.add_option("--seed", o.seed, "Random seed");
  cmd.add_option("--output", o.output, "Output directory (also where stage inputs are read)");
  cmd.add_option("--method", o.method, "Sampler: direct, metropolis or both");
  cmd.add_option("--flows", o.flows, "Flows CSV");
  cmd.add_option("--gdp", o.gdp, "GDP CSV");
  cmd.add_option("--samples", o.samples, "Direct samples per year");
}

itn::RunConfig resolve(const Overrides& o) {
  itn::RunConfig c = o.config.empty() ? itn::RunConfig{} : itn::load_config(o.config);
  if (!o.years.empty()) c.years = itn::parse_years(o.years);
  if (!o.method.empty()) c.method = itn::parse_method(o.method);
  if (!o.output.empty()) c.output_dir = o.output;
  if (!o.flows.empty()) c.flows_path = o.flows;
  if (!o.gdp.empty()) c.gdp_path = o.gdp;
  if (o.seed) c.seed = *o.seed;
  if (o.samples) c.samples = *o.samples;
  if (c.years.empty()) throw itn::ConfigError("no years given (use --years or the config file)");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-entropy trade network toolkit"};
  app.require_subcommand(1);

  Overrides o;
  auto* ingest = app.add_subcommand("ingest", "Build yearly snapshots from flows and GDP files");
  auto* fit = app.add_subcommand("fit", "Fit ensemble fields to each snapshot");
  auto* simulate = app.add_subcommand("simulate", "Sample the fitted ensemble");
  auto* analyze = app.add_subcommand("analyze", "Strength, flow cloud, histogram and fluctuation-response tables");
  for (auto* cmd : {ingest, fit, simulate, analyze}) add_common(*cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const itn::CommandIo io{std::cout, std::cerr};
  try {
    const auto config = resolve(o);
    if (ingest->parsed()) itn::cmd_ingest(config, io);
    if (fit->parsed()) itn::cmd_fit(config, io);
    if (simulate->parsed()) itn::cmd_simulate(config, io);
    if (analyze->parsed()) itn::cmd_analyze(config, io);
  } catch (const itn::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const itn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}

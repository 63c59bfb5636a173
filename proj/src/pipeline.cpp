#include "itn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>

#include "itn/csv.hpp"
#include "itn/error.hpp"
#include "itn/io.hpp"
#include "itn/stats.hpp"

namespace itn {

namespace fs = std::filesystem;
using nlohmann::json;

MethodChoice parse_method(const std::string& text) {
  if (text == "direct") return MethodChoice::direct;
  if (text == "metropolis") return MethodChoice::metropolis;
  if (text == "both") return MethodChoice::both;
  throw ConfigError("unknown method '" + text + "' (expected direct, metropolis or both)");
}

std::string to_string(MethodChoice method) {
  switch (method) {
    case MethodChoice::direct: return "direct";
    case MethodChoice::metropolis: return "metropolis";
    case MethodChoice::both: return "both";
  }
  return "unknown";
}

std::vector<int> parse_years(const std::string& text) {
  auto year = [&](std::string_view token) {
    try {
      return static_cast<int>(csv::parse_int(token));
    } catch (const FormatError&) {
      throw ConfigError("invalid year '" + std::string(token) + "' in '" + text + "'");
    }
  };
  std::set<int> years;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int a = year(std::string_view(text).substr(0, dots));
    const int b = year(std::string_view(text).substr(dots + 2));
    if (b < a) throw ConfigError("empty year range '" + text + "'");
    for (int y = a; y <= b; ++y) years.insert(y);
  } else {
    for (const auto& token : csv::split(text)) {
      if (token.empty()) throw ConfigError("empty year in '" + text + "'");
      years.insert(year(token));
    }
  }
  if (years.empty()) throw ConfigError("no years given");
  return {years.begin(), years.end()};
}

void RunConfig::validate() const {
  if (years.empty()) throw ConfigError("no years given");
  if (samples < 0) throw ConfigError("samples must be nonnegative");
  if (output_dir.empty()) throw ConfigError("output directory is empty");
  if (censor_threshold < 0.0) throw ConfigError("censor_threshold must be nonnegative");
  if (hist_bins < 5) throw ConfigError("hist_bins must be at least 5");
  if (cloud_bins < 1) throw ConfigError("cloud_bins must be positive");
  if (!(ks_alpha > 0.0 && ks_alpha < 1.0)) throw ConfigError("ks_alpha must lie in (0, 1)");
  chain.validate();
}

namespace {

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError("unknown config key '" + where + key + "'");
    }
  }
}

}  // namespace

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"flows", "gdp", "years", "output", "seed", "method", "samples", "chain", "filters",
                  "censor_threshold", "hist_bins", "cloud_bins", "ks_alpha"},
                 "");

  RunConfig c;
  // Relative input paths resolve against the config file's directory.
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  if (j.contains("flows")) c.flows_path = resolve(get<std::string>(j, "flows"));
  if (j.contains("gdp")) c.gdp_path = resolve(get<std::string>(j, "gdp"));
  if (j.contains("output")) c.output_dir = resolve(get<std::string>(j, "output"));
  if (j.contains("years")) {
    const auto& y = j.at("years");
    if (y.is_array()) {
      std::set<int> ys;
      for (const auto& v : y) {
        if (!v.is_number_integer()) throw ConfigError("config 'years' entries must be integers");
        ys.insert(v.get<int>());
      }
      c.years.assign(ys.begin(), ys.end());
    } else if (y.is_string()) {
      c.years = parse_years(y.get<std::string>());
    } else if (y.is_number_integer()) {
      c.years = {y.get<int>()};
    } else {
      throw ConfigError("config 'years' must be a list, a range string or an integer");
    }
  }
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("method")) c.method = parse_method(get<std::string>(j, "method"));
  if (j.contains("samples")) c.samples = get<int>(j, "samples");
  if (j.contains("censor_threshold")) c.censor_threshold = get<double>(j, "censor_threshold");
  if (j.contains("hist_bins")) c.hist_bins = get<std::size_t>(j, "hist_bins");
  if (j.contains("cloud_bins")) c.cloud_bins = get<std::size_t>(j, "cloud_bins");
  if (j.contains("ks_alpha")) c.ks_alpha = get<double>(j, "ks_alpha");
  if (j.contains("chain")) {
    const auto& ch = j.at("chain");
    reject_unknown(ch, {"sweeps", "burn_in", "thin", "step_scale", "start"}, "chain.");
    if (ch.contains("sweeps")) c.chain.sweeps = get<long>(ch, "sweeps");
    if (ch.contains("burn_in")) c.chain.burn_in = get<long>(ch, "burn_in");
    if (ch.contains("thin")) c.chain.thin = get<long>(ch, "thin");
    if (ch.contains("step_scale")) c.chain.step_scale = get<double>(ch, "step_scale");
    if (ch.contains("start")) {
      const auto s = get<std::string>(ch, "start");
      if (s == "mean") c.chain.start = ChainConfig::Start::mean;
      else if (s == "zero") c.chain.start = ChainConfig::Start::zero;
      else throw ConfigError("chain.start must be 'mean' or 'zero'");
    }
  }
  if (j.contains("filters")) {
    const auto& f = j.at("filters");
    reject_unknown(f, {"min_expected_share", "min_bin_count"}, "filters.");
    if (f.contains("min_expected_share")) {
      if (f.at("min_expected_share").is_null()) c.filters.min_expected_share.reset();
      else c.filters.min_expected_share = get<double>(f, "min_expected_share");
    }
    if (f.contains("min_bin_count")) {
      if (f.at("min_bin_count").is_null()) c.filters.min_count.reset();
      else c.filters.min_count = get<std::size_t>(f, "min_bin_count");
    }
  }
  return c;
}

namespace {

void ensure_output_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw DataError("cannot create output directory " + config.output_dir.string() + ": " + ec.message());
}

std::vector<FlowRecord> load_flows(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing flows file: " + path.string());
  return parse_flows(in);
}

std::vector<GdpRecord> load_gdp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing GDP file: " + path.string());
  return parse_gdp(in);
}

io::Metadata chain_metadata(const RunConfig& c) {
  return {{"sweeps", std::to_string(c.chain.sweeps)},
          {"burn_in", std::to_string(c.chain.burn_in)},
          {"thin", std::to_string(c.chain.thin)},
          {"step_scale", csv::format(c.chain.step_scale)},
          {"start", c.chain.start == ChainConfig::Start::mean ? "mean" : "zero"},
          {"seed", std::to_string(c.seed)}};
}

std::string describe(const std::optional<double>& v) { return v ? csv::format(*v) : "none"; }
std::string describe(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "none"; }

}  // namespace

void cmd_ingest(const RunConfig& config, const CommandIo& io) {
  if (config.years.empty()) throw ConfigError("no years given");
  if (config.flows_path.empty() || config.gdp_path.empty()) throw ConfigError("ingest needs flows and gdp paths");
  const auto flows = load_flows(config.flows_path);
  const auto gdps = load_gdp(config.gdp_path);
  ensure_output_dir(config);

  for (const int year : config.years) {
    const bool any = std::any_of(flows.begin(), flows.end(), [&](const auto& f) { return f.year == year; }) ||
                     std::any_of(gdps.begin(), gdps.end(), [&](const auto& g) { return g.year == year; });
    if (!any) {
      io.warn << "warning: no data for " << year << ", skipped\n";
      continue;
    }
    try {
      const auto built = build_snapshot(year, flows, gdps);
      const auto& s = built.snapshot;
      io::write_snapshot(config.output_dir, s, {{"dropped", std::to_string(built.dropped.size())}});
      io.out << "year=" << year << " N=" << s.size() << " X=" << csv::format(s.total_gdp())
             << " T=" << csv::format(s.total_trade()) << " dropped=" << built.dropped.size() << '\n';
      if (!built.dropped.empty()) {
        io.warn << "warning: " << year << ": dropped " << built.dropped.size() << " trading countries without GDP:";
        for (const auto& c : built.dropped) io.warn << ' ' << c;
        io.warn << '\n';
      }
    } catch (const DataError& e) {
      io.warn << "warning: " << year << ": " << e.what() << ", skipped\n";
    }
  }
}

void cmd_fit(const RunConfig& config, const CommandIo& io) {
  if (config.years.empty()) throw ConfigError("no years given");
  for (const int year : config.years) {
    const auto snapshot = io::read_snapshot(config.output_dir, year);
    const auto params = fit_params(snapshot);
    io::write_params(config.output_dir, params);
    io.out << "year=" << year << " N=" << params.size() << " residual=" << csv::format(fit_residual(params))
           << '\n';
  }
}

void cmd_simulate(const RunConfig& config, const CommandIo& io) {
  config.validate();
  const bool direct = config.method != MethodChoice::metropolis;
  const bool metropolis = config.method != MethodChoice::direct;
  ChainConfig chain = config.chain;
  chain.seed = config.seed;

  for (const int year : config.years) {
    const auto params = io::read_params(config.output_dir, year);
    if (params.size() < 2) throw DataError("year " + std::to_string(year) + ": need at least two countries");
    if (direct) {
      for (int k = 0; k < config.samples; ++k) {
        const auto seed = config.seed + static_cast<std::uint64_t>(k);
        io::write_sample(io::sample_path(config.output_dir, year, seed), sample_direct(params, seed));
      }
      io.out << "year=" << year << " direct samples=" << config.samples << '\n';
    }
    if (metropolis) {
      SampledGraph last;
      const auto run = metropolis_stream(params, chain, [&](const SampledGraph& g) { last = g; });
      const auto report = chain_diagnostics(run, params);
      io::write_chain(io::chain_path(config.output_dir, year), report.trace, chain_metadata(config));
      if (last.weights.size() > 0) {
        io::write_sample(io::metropolis_sample_path(config.output_dir, year, config.seed), last,
                         chain_metadata(config));
      }
      const auto window = std::max<std::size_t>(1, report.trace.size() / 10);
      io.out << "year=" << year << " metropolis acceptance=" << csv::format(run.acceptance_rate())
             << " tail_mean_H=" << csv::format(report.tail_mean(window))
             << " equilibrium_H=" << csv::format(report.equilibrium_mean) << '\n';
    }
    if (direct && metropolis) {
      io::CsvWriter ks(config.output_dir / ("ks-" + std::to_string(year) + ".csv"),
                       {{"alpha", csv::format(config.ks_alpha)}}, "i,j,D,p_value");
      std::size_t pairs = 0, passed = 0;
      for (Eigen::Index i = 0; i < params.size(); ++i) {
        for (Eigen::Index j = 0; j < params.size(); ++j) {
          if (i == j) continue;
          const auto mc = metropolis_marginal(params, chain, i, j);
          const auto ex = direct_marginal(params, config.seed, i, j, mc.size());
          const auto r = stats::ks_two_sample(mc, ex);
          ks.row(static_cast<long>(i), static_cast<long>(j), r.statistic, r.p_value);
          ++pairs;
          passed += r.rejects(config.ks_alpha) ? 0 : 1;
        }
      }
      ks.close();
      io.out << "year=" << year << " ks_pass=" << passed << "/" << pairs << " alpha=" << csv::format(config.ks_alpha)
             << '\n';
    }
  }
}

namespace {

void write_histogram(const fs::path& path, const VolumeHistogram& h) {
  io::CsvWriter w(path, {{"source", to_string(h.source)}, {"values", std::to_string(h.total)}},
                  "bin_lo,bin_hi,density");
  for (std::size_t k = 0; k < h.density.size(); ++k) w.row(h.edges[k], h.edges[k + 1], h.density[k]);
  w.close();
}

std::vector<double> positive_shares(const Eigen::MatrixXd& w, double total) {
  std::vector<double> out;
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      if (i != j && w(i, j) > 0.0) out.push_back(w(i, j) / total);
  return out;
}

}  // namespace

void cmd_analyze(const RunConfig& config, const CommandIo& io) {
  config.validate();
  const auto& dir = config.output_dir;
  const std::string censor = csv::format(config.censor_threshold);

  for (const int year : config.years) {
    const auto y = std::to_string(year);
    const auto snapshot = io::read_snapshot(dir, year);
    const auto params = io::read_params(dir, year);
    if (params.countries != snapshot.countries()) {
      throw DataError("params-" + y + ".csv does not match snapshot-" + y + ".csv");
    }
    const auto sample_file = io::sample_path(dir, year, config.seed);
    if (!fs::exists(sample_file)) throw DataError("missing prerequisite file: " + sample_file.string());

    {
      const auto fit = strength_fit(snapshot);
      io::CsvWriter w(dir / ("strength-" + y + ".csv"), {{"year", y}},
                      "a_fit_out,a_fit_in,a_theory,loglog_slope_out,loglog_slope_in,countries_out,countries_in");
      w.row(fit.a_fit_out, fit.a_fit_in, fit.a_theory, fit.loglog_slope_out, fit.loglog_slope_in,
            static_cast<long>(fit.countries_out), static_cast<long>(fit.countries_in));
      w.close();
    }
    {
      const auto cloud = flow_cloud(snapshot, params, config.censor_threshold, config.cloud_bins);
      io::CsvWriter rows(dir / ("cloud-" + y + ".csv"), {{"year", y}, {"censor_threshold", censor}},
                         "i,j,gdp_product,w_observed,w_expected");
      for (const auto& r : cloud.rows) {
        rows.row(static_cast<long>(r.i), static_cast<long>(r.j), r.gdp_product, r.observed, r.expected);
      }
      rows.close();
      io::CsvWriter bins(dir / ("cloud-bins-" + y + ".csv"), {{"year", y}, {"censor_threshold", censor}},
                         "bin_lo,bin_hi,count,mean_observed,mean_expected");
      for (const auto& b : cloud.bins) bins.row(b.lo, b.hi, static_cast<long>(b.count), b.mean_observed, b.mean_expected);
      bins.close();
    }
    {
      const double total = snapshot.total_trade();
      if (!(total > 0.0)) throw DataError("year " + y + ": degenerate snapshot (T = 0)");
      const auto real = positive_shares(Eigen::MatrixXd(snapshot.weights()), total);
      const auto simulated = positive_shares(io::read_sample(sample_file, snapshot.size()), total);
      const auto expected = expected_shares(params);
      if (real.empty() || simulated.empty() || expected.empty()) {
        throw DataError("year " + y + ": no positive volumes to histogram");
      }
      double lo = expected.front(), hi = expected.front();
      for (const auto* v : {&real, &simulated, &expected}) {
        const auto [a, b] = std::minmax_element(v->begin(), v->end());
        lo = std::min(lo, *a);
        hi = std::max(hi, *b);
      }
      const auto edges = lo < hi ? stats::log_edges(lo, hi, config.hist_bins)
                                 : stats::log_edges(lo / 2.0, hi * 2.0, config.hist_bins);
      write_histogram(dir / ("hist-" + y + "-real.csv"), volume_distribution(real, edges, VolumeSource::real));
      write_histogram(dir / ("hist-" + y + "-simulated.csv"),
                      volume_distribution(simulated, edges, VolumeSource::simulated));
      write_histogram(dir / ("hist-" + y + "-expected.csv"),
                      volume_distribution(expected, edges, VolumeSource::expected));
    }
    io.out << "year=" << year << " analyzed\n";
  }

  for (std::size_t k = 0; k + 1 < config.years.size(); ++k) {
    const int t = config.years[k];
    const int t1 = config.years[k + 1];
    if (t1 != t + 1) continue;
    const auto tag = std::to_string(t) + "-" + std::to_string(t1);
    const auto snap_t = io::read_snapshot(dir, t);
    const auto snap_t1 = io::read_snapshot(dir, t1);
    const auto params_t = io::read_params(dir, t);
    const auto points = fr_points(snap_t, snap_t1, params_t);
    const io::Metadata meta{{"t", std::to_string(t)},
                            {"t1", std::to_string(t1)},
                            {"min_expected_share", describe(config.filters.min_expected_share)},
                            {"min_bin_count", describe(config.filters.min_count)}};
    {
      io::CsvWriter w(dir / ("frpoints-" + tag + ".csv"), {{"t", std::to_string(t)}, {"t1", std::to_string(t1)}},
                      "i,j,eta_ij,rel_dv,rel_dxi_sum");
      for (const auto& p : points) w.row(static_cast<long>(p.i), static_cast<long>(p.j), p.eta_ij, p.rel_dv, p.rel_dxi_sum);
      w.close();
    }
    const auto bins = fr_bin_points(points, config.filters);
    {
      io::CsvWriter w(dir / ("fr-" + tag + ".csv"), meta, "m,n,count,geo_mean_dxi,geo_mean_dv");
      for (const auto& b : bins) w.row(b.m, b.n, static_cast<long>(b.count), b.geo_mean_dxi, b.geo_mean_dv);
      w.close();
    }
    {
      io::CsvWriter w(dir / ("fr-agg-" + tag + ".csv"), meta, "n,cells,geo_mean_dxi,geo_mean_dv");
      if (!bins.empty()) {
        for (const auto& a : fr_report(bins).aggregates) {
          w.row(a.n, static_cast<long>(a.cells), a.geo_mean_dxi, a.geo_mean_dv);
        }
      }
      w.close();
    }
    io.out << "fr " << tag << " points=" << points.size() << " cells=" << bins.size() << '\n';
  }
}

}  // namespace itn

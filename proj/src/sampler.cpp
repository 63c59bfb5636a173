#include "itn/sampler.hpp"

#include <cmath>
#include <numeric>

#include "itn/error.hpp"

namespace itn {

std::string to_string(SampleMethod method) {
  return method == SampleMethod::direct ? "direct" : "metropolis";
}

namespace {

double direct_draw(const EnsembleParams<double>& params, std::uint64_t seed, Eigen::Index i, Eigen::Index j) {
  SplitMix64 rng(pair_stream_seed(seed, StreamKind::direct, params.countries[i], params.countries[j]));
  return -std::log(rng.uniform_open_closed()) / (params.theta[i] * params.theta[j]);
}

void check_pair(const EnsembleParams<double>& params, Eigen::Index i, Eigen::Index j) {
  if (i == j || i < 0 || j < 0 || i >= params.size() || j >= params.size()) {
    throw ValueError("invalid directed pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
}

bool retained_at(const ChainConfig& c, long sweep) { return sweep > c.burn_in && (sweep - c.burn_in) % c.thin == 0; }

PairChain make_chain(const EnsembleParams<double>& params, const ChainConfig& config, Eigen::Index i,
                     Eigen::Index j) {
  const double theta = params.theta[i] * params.theta[j];
  const double initial = config.start == ChainConfig::Start::mean ? 1.0 / theta : 0.0;
  return PairChain(theta, initial, config.step_scale,
                   pair_stream_seed(config.seed, StreamKind::metropolis, params.countries[i], params.countries[j]));
}

}  // namespace

SampledGraph sample_direct(const EnsembleParams<double>& params, std::uint64_t seed) {
  const auto n = params.size();
  SampledGraph g{params.year, params.countries, Eigen::MatrixXd::Zero(n, n), seed, SampleMethod::direct};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) g.weights(i, j) = direct_draw(params, seed, i, j);
  return g;
}

std::vector<double> direct_marginal(const EnsembleParams<double>& params, std::uint64_t seed, Eigen::Index i,
                                    Eigen::Index j, std::size_t count) {
  check_pair(params, i, j);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = direct_draw(params, seed + k, i, j);
  return out;
}

void ChainConfig::validate() const {
  if (sweeps <= 0) throw ConfigError("chain: sweeps must be positive");
  if (burn_in <= 0) throw ConfigError("chain: burn_in must be positive");
  if (burn_in >= sweeps) throw ConfigError("chain: burn_in must be smaller than sweeps");
  if (thin < 1) throw ConfigError("chain: thin must be at least 1");
  if (!(step_scale > 0.0) || !std::isfinite(step_scale)) throw ConfigError("chain: step_scale must be positive");
}

long ChainConfig::retained() const { return (sweeps - burn_in) / thin; }

double metropolis_acceptance(double theta, double w, double w_new) {
  if (w_new < 0.0) return 0.0;
  const double dh = theta * (w_new - w);
  return dh <= 0.0 ? 1.0 : std::exp(-dh);
}

PairChain::PairChain(double theta, double initial, double step_scale, std::uint64_t stream_seed)
    : theta_(theta), w_(initial), half_width_(step_scale / theta), rng_(stream_seed) {}

bool PairChain::step() {
  const double proposal = w_ + half_width_ * rng_.uniform_symmetric();
  const double u = rng_.uniform_open_closed();
  if (u <= metropolis_acceptance(theta_, w_, proposal)) {
    w_ = proposal;
    return true;
  }
  return false;
}

MetropolisRun metropolis_stream(const EnsembleParams<double>& params, const ChainConfig& config,
                                const std::function<void(const SampledGraph&)>& on_sample) {
  config.validate();
  const auto n = params.size();

  struct Link {
    Eigen::Index i, j;
    PairChain chain;
  };
  std::vector<Link> links;
  links.reserve(static_cast<std::size_t>(n * (n - 1)));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) links.push_back({i, j, make_chain(params, config, i, j)});

  MetropolisRun run;
  run.h_trace.reserve(static_cast<std::size_t>(config.sweeps) + 1);
  double h0 = 0.0;
  for (const auto& l : links) h0 += l.chain.theta() * l.chain.weight();
  run.h_trace.push_back(h0);

  SampledGraph graph{params.year, params.countries, Eigen::MatrixXd::Zero(n, n), config.seed,
                     SampleMethod::metropolis};
  for (long sweep = 1; sweep <= config.sweeps; ++sweep) {
    double h = 0.0;
    for (auto& l : links) {
      run.accepted += l.chain.step() ? 1 : 0;
      h += l.chain.theta() * l.chain.weight();
    }
    run.proposed += static_cast<long>(links.size());
    run.h_trace.push_back(h);
    if (retained_at(config, sweep)) {
      for (const auto& l : links) graph.weights(l.i, l.j) = l.chain.weight();
      on_sample(graph);
    }
  }
  return run;
}

MetropolisRun metropolis_run(const EnsembleParams<double>& params, const ChainConfig& config) {
  std::vector<SampledGraph> samples;
  auto run = metropolis_stream(params, config, [&](const SampledGraph& g) { samples.push_back(g); });
  run.samples = std::move(samples);
  return run;
}

std::vector<double> metropolis_marginal(const EnsembleParams<double>& params, const ChainConfig& config,
                                        Eigen::Index i, Eigen::Index j) {
  config.validate();
  check_pair(params, i, j);
  auto chain = make_chain(params, config, i, j);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(config.retained()));
  for (long sweep = 1; sweep <= config.sweeps; ++sweep) {
    chain.step();
    if (retained_at(config, sweep)) out.push_back(chain.weight());
  }
  return out;
}

double ChainReport::tail_mean(std::size_t window) const {
  if (trace.empty()) return 0.0;
  window = std::min(window, trace.size());
  return std::accumulate(trace.end() - static_cast<std::ptrdiff_t>(window), trace.end(), 0.0) /
         static_cast<double>(window);
}

ChainReport chain_diagnostics(const MetropolisRun& chain, const EnsembleParams<double>& params) {
  if (chain.h_trace.empty()) throw DataError("chain_diagnostics: empty chain");
  ChainReport r;
  r.trace = chain.h_trace;
  r.running_mean.resize(r.trace.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    sum += r.trace[k];
    r.running_mean[k] = sum / static_cast<double>(k + 1);
  }
  const auto n = static_cast<double>(params.size());
  r.equilibrium_mean = n * (n - 1.0);
  r.initial = r.trace.front();
  return r;
}

}  // namespace itn

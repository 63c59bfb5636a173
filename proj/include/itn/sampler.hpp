#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "itn/ensemble.hpp"
#include "itn/random.hpp"

namespace itn {

enum class SampleMethod { direct, metropolis };

std::string to_string(SampleMethod method);

/// One realization of the ensemble. Dense weights, zero diagonal.
struct SampledGraph {
  int year = 0;
  std::vector<std::string> countries;
  Eigen::MatrixXd weights;
  std::uint64_t seed = 0;
  SampleMethod method = SampleMethod::direct;
};

/// Exact sampler: every w_ij drawn independently from Exp(theta_ij) by
/// inverse CDF, w = -ln(u) / theta_ij with u uniform on (0, 1].
///
/// Each pair draws from its own stream keyed by (seed, exporter, importer),
/// so a pair's draw is the same in every year sampled with the same seed.
SampledGraph sample_direct(const EnsembleParams<double>& params, std::uint64_t seed);

/// Values of w_ij across graphs sampled with seeds seed, seed+1, ...,
/// seed+count-1. Matches sample_direct entry for entry.
std::vector<double> direct_marginal(const EnsembleParams<double>& params, std::uint64_t seed, Eigen::Index i,
                                    Eigen::Index j, std::size_t count);

struct ChainConfig {
  enum class Start { mean, zero };

  long sweeps = 100000;
  long burn_in = 1000;
  long thin = 10;
  double step_scale = 1.0;
  std::uint64_t seed = 0;
  Start start = Start::mean;

  /// Throws ConfigError unless sweeps > 0, 0 < burn_in < sweeps, thin >= 1,
  /// step_scale > 0.
  void validate() const;

  /// Number of graphs a run retains.
  long retained() const;
};

/// Metropolis acceptance probability for w -> w_new under Exp(theta):
/// 0 if w_new < 0, otherwise min(1, exp(-theta (w_new - w))).
double metropolis_acceptance(double theta, double w, double w_new);

/// Single-link Metropolis chain. Proposal w' = w + U(-delta, delta) with
/// delta = step_scale / theta.
class PairChain {
 public:
  PairChain(double theta, double initial, double step_scale, std::uint64_t stream_seed);

  /// One proposed update. Returns true when accepted.
  bool step();

  double weight() const { return w_; }
  double theta() const { return theta_; }

 private:
  double theta_;
  double w_;
  double half_width_;
  SplitMix64 rng_;
};

struct MetropolisRun {
  std::vector<SampledGraph> samples;  // retained graphs after burn-in, thinned
  std::vector<double> h_trace;        // H(G) at sweep 0 (initial state) through sweeps
  long accepted = 0;
  long proposed = 0;

  double acceptance_rate() const { return proposed ? double(accepted) / double(proposed) : 0.0; }
};

/// Runs the chain. One sweep proposes one update per directed pair; pairs
/// use independent streams, so results do not depend on update order.
/// Throws ConfigError for an invalid config.
MetropolisRun metropolis_run(const EnsembleParams<double>& params, const ChainConfig& config);

/// Same chain, handing each retained graph to `on_sample` instead of keeping
/// it. The returned run has an empty `samples`.
MetropolisRun metropolis_stream(const EnsembleParams<double>& params, const ChainConfig& config,
                                const std::function<void(const SampledGraph&)>& on_sample);

/// Retained values of w_ij alone. Identical to what metropolis_run keeps for
/// that pair, without simulating the rest of the graph.
std::vector<double> metropolis_marginal(const EnsembleParams<double>& params, const ChainConfig& config,
                                        Eigen::Index i, Eigen::Index j);

struct ChainReport {
  std::vector<double> trace;         // H per sweep, index 0 = initial state
  std::vector<double> running_mean;  // mean of trace[0..k]
  double equilibrium_mean = 0.0;     // N(N-1)
  double initial = 0.0;
  /// Mean of H over the last `window` sweeps.
  double tail_mean(std::size_t window) const;
};

/// Throws DataError on an empty trace.
ChainReport chain_diagnostics(const MetropolisRun& chain, const EnsembleParams<double>& params);

}  // namespace itn

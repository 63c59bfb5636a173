#include "itn/sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "itn/error.hpp"
#include "itn/stats.hpp"
#include "test_util.hpp"

namespace itn {
namespace {

EnsembleParams<double> params_for(const Eigen::VectorXd& x, double total_trade) {
  return fit_params<double>(2000, testing::codes(static_cast<int>(x.size())), x, total_trade);
}

EnsembleParams<double> ten_nodes() {
  Eigen::VectorXd x(10);
  x << 1, 2, 3, 5, 8, 13, 21, 34, 55, 89;
  return params_for(x, 1000.0);
}

TEST(SampleDirect, DeterministicForSeed) {
  const auto p = ten_nodes();
  const auto a = sample_direct(p, 5);
  const auto b = sample_direct(p, 5);
  const auto c = sample_direct(p, 6);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_NE(a.weights, c.weights);
  EXPECT_EQ(a.method, SampleMethod::direct);
  EXPECT_EQ(a.weights.diagonal(), Eigen::VectorXd::Zero(10));
  EXPECT_GE(a.weights.minCoeff(), 0.0);
}

TEST(SampleDirect, MarginalMatchesGraphs) {
  const auto p = ten_nodes();
  const auto m = direct_marginal(p, 100, 3, 7, 5);
  for (std::size_t k = 0; k < m.size(); ++k) EXPECT_EQ(m[k], sample_direct(p, 100 + k).weights(3, 7));
}

TEST(SampleDirect, ExponentialMoments) {
  const auto p = params_for(Eigen::Vector2d(1, 1), 4.0);  // theta_12 = 1
  const auto w = direct_marginal(p, 1, 0, 1, 100000);
  EXPECT_NEAR(stats::mean(w), 1.0, 0.01);
  EXPECT_NEAR(stats::variance(w), 1.0, 0.03);
}

TEST(SampleDirect, KolmogorovSmirnovAgainstCdf) {
  const auto p = params_for(Eigen::Vector2d(1, 3), 2.0);
  const double theta = p.theta[0] * p.theta[1];
  const auto w = direct_marginal(p, 9, 1, 0, 100000);
  const auto r = stats::ks_one_sample(w, [&](double v) { return 1.0 - std::exp(-theta * v); });
  EXPECT_LT(r.statistic, stats::kolmogorov_critical(0.01) / std::sqrt(100000.0));
}

TEST(SampleDirect, SameSeedCouplesYears) {
  // A pair keeps its uniform draw across years, so w scales as 1 / theta_ij.
  Eigen::VectorXd x(4);
  x << 1, 2, 3, 4;
  const auto p0 = params_for(x, 10.0);
  x[2] *= 1.5;
  const auto p1 = params_for(x, 12.0);
  const auto g0 = sample_direct(p0, 3);
  const auto g1 = sample_direct(p1, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const double ratio = (p0.theta[i] * p0.theta[j]) / (p1.theta[i] * p1.theta[j]);
      EXPECT_NEAR(g1.weights(i, j) / g0.weights(i, j), ratio, 1e-12 * ratio);
    }
}

TEST(Metropolis, AcceptanceRule) {
  EXPECT_EQ(metropolis_acceptance(2.0, 1.0, 1.0), 1.0);
  EXPECT_EQ(metropolis_acceptance(2.0, 1.0, 0.5), 1.0);
  EXPECT_EQ(metropolis_acceptance(2.0, 1.0, -0.1), 0.0);
  EXPECT_DOUBLE_EQ(metropolis_acceptance(2.0, 1.0, 1.5), std::exp(-1.0));
}

TEST(Metropolis, DetailedBalanceOnGrid) {
  for (const double theta : {1e-6, 0.3, 1.0, 7.0, 1e5}) {
    const double scale = 1.0 / theta;
    for (int a = 0; a <= 20; ++a) {
      for (int b = 0; b <= 20; ++b) {
        const double w = 0.25 * a * scale, w2 = 0.25 * b * scale;
        // Symmetric proposal: q(w -> w') = q(w' -> w) cancels.
        const double lhs = link_weight_density(theta, w) * metropolis_acceptance(theta, w, w2);
        const double rhs = link_weight_density(theta, w2) * metropolis_acceptance(theta, w2, w);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(lhs, rhs)) << theta << " " << w << " " << w2;
      }
    }
  }
}

TEST(Metropolis, InvalidConfig) {
  const auto p = ten_nodes();
  ChainConfig c;
  c.sweeps = 100;
  c.burn_in = 100;
  EXPECT_THROW(metropolis_run(p, c), ConfigError);
  c.burn_in = 0;
  EXPECT_THROW(metropolis_run(p, c), ConfigError);
  c.burn_in = 10;
  c.thin = 0;
  EXPECT_THROW(metropolis_run(p, c), ConfigError);
  c.thin = 1;
  c.step_scale = 0.0;
  EXPECT_THROW(metropolis_run(p, c), ConfigError);
  c.step_scale = 1.0;
  EXPECT_NO_THROW(metropolis_run(p, c));
}

TEST(Metropolis, SinglePairMean) {
  const auto p = params_for(Eigen::Vector2d(1, 1), 4.0);
  ChainConfig c;
  c.sweeps = 100000;
  c.burn_in = 1000;
  c.thin = 1;
  c.seed = 2;
  const auto w = metropolis_marginal(p, c, 0, 1);
  EXPECT_EQ(w.size(), 99000u);
  EXPECT_NEAR(stats::mean(w), 1.0, 0.02);
}

TEST(Metropolis, RetainedSamplesAndMarginalAgree) {
  const auto p = ten_nodes();
  ChainConfig c;
  c.sweeps = 2000;
  c.burn_in = 500;
  c.thin = 7;
  c.seed = 11;
  const auto run = metropolis_run(p, c);
  ASSERT_EQ(static_cast<long>(run.samples.size()), c.retained());
  EXPECT_EQ(run.h_trace.size(), 2001u);
  const auto m = metropolis_marginal(p, c, 4, 2);
  ASSERT_EQ(m.size(), run.samples.size());
  for (std::size_t k = 0; k < m.size(); ++k) EXPECT_EQ(m[k], run.samples[k].weights(4, 2));
  for (const auto& g : run.samples) {
    EXPECT_EQ(g.method, SampleMethod::metropolis);
    EXPECT_EQ(g.weights.diagonal(), Eigen::VectorXd::Zero(10));
    EXPECT_GE(g.weights.minCoeff(), 0.0);
  }
}

TEST(Metropolis, Deterministic) {
  const auto p = ten_nodes();
  ChainConfig c;
  c.sweeps = 3000;
  c.burn_in = 100;
  c.seed = 4;
  const auto a = metropolis_run(p, c);
  const auto b = metropolis_run(p, c);
  EXPECT_EQ(a.h_trace, b.h_trace);
  EXPECT_EQ(a.samples.back().weights, b.samples.back().weights);
  c.seed = 5;
  EXPECT_NE(metropolis_run(p, c).h_trace, a.h_trace);
}

TEST(Metropolis, MarginalsMatchDirectSampler) {
  const auto p = ten_nodes();
  ChainConfig c;  // defaults: 1e5 sweeps, burn-in 1e3, thin 10
  c.seed = 1;
  int passed = 0, pairs = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      if (i == j) continue;
      const auto mc = metropolis_marginal(p, c, i, j);
      const auto ex = direct_marginal(p, 1, i, j, mc.size());
      passed += stats::ks_two_sample(mc, ex).rejects(0.01) ? 0 : 1;
      ++pairs;
    }
  EXPECT_GE(passed, static_cast<int>(std::ceil(0.95 * pairs)));
}

TEST(ChainDiagnostics, InitialAtMean) {
  const auto p = ten_nodes();
  ChainConfig c;
  c.sweeps = 10;
  c.burn_in = 1;
  const auto report = chain_diagnostics(metropolis_run(p, c), p);
  EXPECT_NEAR(report.initial, 90.0, 1e-12);
  EXPECT_EQ(report.equilibrium_mean, 90.0);
  EXPECT_EQ(report.running_mean.front(), report.trace.front());
}

TEST(ChainDiagnostics, EquilibriumMean) {
  const auto p = ten_nodes();
  ChainConfig c;
  c.seed = 8;
  const auto report = chain_diagnostics(metropolis_run(p, c), p);
  EXPECT_NEAR(report.running_mean.back(), 90.0, 0.02 * 90.0);
}

TEST(ChainDiagnostics, ColdStartRelaxesUpward) {
  const auto p = ten_nodes();
  ChainConfig c;
  c.sweeps = 2000;
  c.burn_in = 10;
  c.start = ChainConfig::Start::zero;
  const auto report = chain_diagnostics(metropolis_run(p, c), p);
  EXPECT_EQ(report.initial, 0.0);
  EXPECT_GT(report.tail_mean(200), report.initial);
  EXPECT_NEAR(report.tail_mean(1000), 90.0, 0.1 * 90.0);
}

TEST(ChainDiagnostics, EmptyChain) {
  EXPECT_THROW(chain_diagnostics(MetropolisRun{}, ten_nodes()), DataError);
}

}  // namespace
}  // namespace itn

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace itn::stats {

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

/// lambda with kolmogorov_survival(lambda) == alpha.
double kolmogorov_critical(double alpha);

struct KsResult {
  double statistic = 0.0;  // sup |F1 - F2|
  double p_value = 1.0;    // asymptotic, with the Stephens small-sample correction
  double effective_n = 0.0;

  bool rejects(double alpha) const { return p_value < alpha; }
};

/// Two-sample Kolmogorov-Smirnov test. Inputs need not be sorted.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

/// D above which a two-sample test of sizes n, m rejects at level alpha.
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Needs at least two
/// distinct x values (throws DataError otherwise).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least squares slope through the origin, sum(x y) / sum(x^2).
double fit_through_origin(std::span<const double> x, std::span<const double> y);

/// n_bins + 1 geometrically spaced edges from lo to hi (lo > 0, hi > lo).
std::vector<double> log_edges(double lo, double hi, std::size_t n_bins);

/// Index of the bin holding `value` given ascending edges; the last bin is
/// closed on the right. Returns -1 outside [edges.front(), edges.back()].
long bin_index(std::span<const double> edges, double value);

double mean(std::span<const double> values);
double variance(std::span<const double> values);  // unbiased

}  // namespace itn::stats

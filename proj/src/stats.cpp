#include "itn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "itn/error.hpp"

namespace itn::stats {

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // Jacobi-transformed series converges fast for small lambda.
    constexpr double pi = std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double t = (2.0 * k - 1.0) * pi / lambda;
      const double term = std::exp(-t * t / 8.0);
      cdf += term;
      if (term < 1e-18 * cdf) break;
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double kolmogorov_critical(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValueError("kolmogorov_critical: alpha must lie in (0, 1)");
  double lo = 0.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double p_value_for(double d, double en) {
  return kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  KsResult r;
  r.statistic = d;
  r.effective_n = n * m / (n + m);
  r.p_value = p_value_for(d, std::sqrt(r.effective_n));
  return r;
}

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DataError("ks_one_sample: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double f = cdf(x[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  KsResult r;
  r.statistic = d;
  r.effective_n = n;
  r.p_value = p_value_for(d, std::sqrt(n));
  return r;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return kolmogorov_critical(alpha) * std::sqrt((nn + mm) / (nn * mm));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValueError("fit_line: size mismatch");
  if (x.size() < 2) throw DataError("fit_line: need at least two points");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw DataError("fit_line: x values are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double fit_through_origin(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValueError("fit_through_origin: size mismatch");
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  if (!(sxx > 0.0)) throw DataError("fit_through_origin: all x are zero");
  return sxy / sxx;
}

std::vector<double> log_edges(double lo, double hi, std::size_t n_bins) {
  if (!(lo > 0.0) || !(hi > lo) || n_bins == 0) throw ValueError("log_edges: need 0 < lo < hi and n_bins > 0");
  std::vector<double> edges(n_bins + 1);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t k = 0; k <= n_bins; ++k) {
    edges[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(n_bins));
  }
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

long bin_index(std::span<const double> edges, double value) {
  if (edges.size() < 2 || value < edges.front() || value > edges.back()) return -1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  const long k = static_cast<long>(it - edges.begin()) - 1;
  return std::min<long>(k, static_cast<long>(edges.size()) - 2);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw DataError("mean: empty input");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
  if (values.size() < 2) throw DataError("variance: need at least two values");
  const double m = mean(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(values.size() - 1);
}

}  // namespace itn::stats

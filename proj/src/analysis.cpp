#include "itn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "itn/error.hpp"
#include "itn/stats.hpp"

namespace itn {

namespace {

struct StrengthSide {
  double a_fit;
  double loglog;
  std::size_t used;
};

StrengthSide fit_side(const Eigen::VectorXd& gdp, const Eigen::VectorXd& s, const char* label) {
  std::vector<double> x, y, lx, ly;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0)) continue;
    x.push_back(gdp[i]);
    y.push_back(s[i]);
    lx.push_back(std::log(gdp[i]));
    ly.push_back(std::log(s[i]));
  }
  if (x.size() < 3) {
    throw DataError(std::string("strength_fit: fewer than 3 countries with positive ") + label + "-strength");
  }
  return {stats::fit_through_origin(x, y), stats::fit_line(lx, ly).slope, x.size()};
}

}  // namespace

StrengthFit strength_fit(int year, const Eigen::VectorXd& gdp, const Eigen::VectorXd& s_out,
                         const Eigen::VectorXd& s_in, double total_trade, double total_gdp) {
  const auto out = fit_side(gdp, s_out, "out");
  const auto in = fit_side(gdp, s_in, "in");
  StrengthFit f;
  f.year = year;
  f.a_fit_out = out.a_fit;
  f.a_fit_in = in.a_fit;
  f.a_theory = total_trade / total_gdp;
  f.loglog_slope_out = out.loglog;
  f.loglog_slope_in = in.loglog;
  f.countries_out = out.used;
  f.countries_in = in.used;
  return f;
}

StrengthFit strength_fit(const Snapshot& snapshot) {
  return strength_fit(snapshot.year(), snapshot.gdp(), snapshot.out_strength(), snapshot.in_strength(),
                      snapshot.total_trade(), snapshot.total_gdp());
}

namespace {

std::vector<double> edges_for(std::span<const double> values, std::size_t n_bins) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return stats::log_edges(*lo / 2.0, *hi * 2.0, n_bins);
  return stats::log_edges(*lo, *hi, n_bins);
}

}  // namespace

FlowCloud flow_cloud(const Snapshot& snapshot, const EnsembleParams<double>& params, double censor_threshold,
                     std::size_t n_bins) {
  if (params.size() != snapshot.size()) throw ValueError("flow_cloud: params do not match snapshot");
  const double scale = params.total_trade / (params.total_gdp * params.total_gdp);
  FlowCloud cloud;
  const auto& w = snapshot.weights();
  for (Eigen::Index i = 0; i < w.outerSize(); ++i) {
    for (WeightMatrix::InnerIterator it(w, i); it; ++it) {
      if (!(it.value() > censor_threshold)) continue;
      const auto j = it.col();
      const double product = params.gdp[i] * params.gdp[j];
      cloud.rows.push_back({i, j, product, it.value(), scale * product});
    }
  }
  if (cloud.rows.empty() || n_bins == 0) return cloud;

  std::vector<double> products;
  products.reserve(cloud.rows.size());
  for (const auto& r : cloud.rows) products.push_back(r.gdp_product);
  const auto edges = edges_for(products, n_bins);
  cloud.bins.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    cloud.bins[k].lo = edges[k];
    cloud.bins[k].hi = edges[k + 1];
  }
  for (const auto& r : cloud.rows) {
    auto& b = cloud.bins[static_cast<std::size_t>(stats::bin_index(edges, r.gdp_product))];
    ++b.count;
    b.mean_observed += r.observed;
    b.mean_expected += r.expected;
  }
  for (auto& b : cloud.bins) {
    if (b.count == 0) continue;
    b.mean_observed /= static_cast<double>(b.count);
    b.mean_expected /= static_cast<double>(b.count);
  }
  return cloud;
}

std::string to_string(VolumeSource source) {
  switch (source) {
    case VolumeSource::real: return "real";
    case VolumeSource::simulated: return "simulated";
    case VolumeSource::expected: return "expected";
  }
  return "unknown";
}

double VolumeHistogram::integral() const {
  double s = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k) s += density[k] * (edges[k + 1] - edges[k]);
  return s;
}

VolumeHistogram volume_distribution(std::span<const double> values, std::vector<double> edges,
                                    VolumeSource source) {
  if (edges.size() < 2) throw ValueError("volume_distribution: need at least one bin");
  VolumeHistogram h;
  h.source = source;
  h.edges = std::move(edges);
  const std::size_t n_bins = h.edges.size() - 1;
  h.counts.assign(n_bins, 0);
  h.density.assign(n_bins, 0.0);
  for (double v : values) {
    const long k = stats::bin_index(h.edges, v);
    if (k < 0) continue;
    ++h.counts[static_cast<std::size_t>(k)];
    ++h.total;
  }
  if (h.total == 0) return h;
  for (std::size_t k = 0; k < n_bins; ++k) {
    h.density[k] = static_cast<double>(h.counts[k]) / (static_cast<double>(h.total) * (h.edges[k + 1] - h.edges[k]));
  }
  return h;
}

VolumeHistogram volume_distribution(std::span<const double> values, std::size_t n_bins, VolumeSource source) {
  if (values.empty()) throw DataError("volume_distribution: empty input");
  if (n_bins < 5) throw ValueError("volume_distribution: need at least 5 bins");
  for (double v : values) {
    if (!(v > 0.0)) throw ValueError("volume_distribution: values must be positive");
  }
  return volume_distribution(values, edges_for(values, n_bins), source);
}

std::vector<double> expected_shares(const EnsembleParams<double>& params) {
  const Eigen::VectorXd xi = params.shares();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(params.size() * (params.size() - 1)));
  for (Eigen::Index i = 0; i < params.size(); ++i)
    for (Eigen::Index j = 0; j < params.size(); ++j)
      if (i != j) out.push_back(xi[i] * xi[j]);
  return out;
}

std::vector<double> predicted_share_masses(const EnsembleParams<double>& params, std::span<const double> edges) {
  if (edges.size() < 2) throw ValueError("predicted_share_masses: need at least one bin");
  std::vector<double> mass(edges.size() - 1, 0.0);
  for (double mu : expected_shares(params)) {
    double upper = std::exp(-edges.front() / mu);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double next = std::exp(-edges[k + 1] / mu);
      mass[k] += upper - next;
      upper = next;
    }
  }
  double total = 0.0;
  for (double m : mass) total += m;
  if (!(total > 0.0)) throw DataError("predicted_share_masses: no probability inside the edges");
  for (double& m : mass) m /= total;
  return mass;
}

std::vector<FrPoint> fr_points(const Snapshot& snapshot_t, const Snapshot& snapshot_t1,
                               const EnsembleParams<double>& params_t) {
  const auto n0 = snapshot_t.size();
  // Indices into year t+1 and into params_t for every country of year t.
  std::vector<Eigen::Index> in_t1(static_cast<std::size_t>(n0), -1);
  std::vector<Eigen::Index> in_params(static_cast<std::size_t>(n0), -1);
  std::unordered_map<std::string, Eigen::Index> param_index;
  for (Eigen::Index k = 0; k < params_t.size(); ++k) param_index.emplace(params_t.countries[k], k);

  double x0 = 0.0, x1 = 0.0;
  for (Eigen::Index i = 0; i < n0; ++i) {
    const auto& code = snapshot_t.countries()[i];
    const auto k = snapshot_t1.index_of(code);
    const auto p = param_index.find(code);
    if (k < 0 || p == param_index.end()) continue;
    in_t1[i] = k;
    in_params[i] = p->second;
    x0 += snapshot_t.gdp()[i];
    x1 += snapshot_t1.gdp()[k];
  }
  if (!(x0 > 0.0)) throw DataError("fr_points: no countries common to both years");

  std::vector<double> rel_dxi(static_cast<std::size_t>(n0), 0.0);
  for (Eigen::Index i = 0; i < n0; ++i) {
    if (in_t1[i] < 0) continue;
    rel_dxi[i] = (snapshot_t1.gdp()[in_t1[i]] / x1) / (snapshot_t.gdp()[i] / x0) - 1.0;
  }

  const double t0 = snapshot_t.total_trade();
  const double t1 = snapshot_t1.total_trade();
  std::vector<FrPoint> points;
  if (!(t0 > 0.0) || !(t1 > 0.0)) return points;

  const auto& w0 = snapshot_t.weights();
  const auto& w1 = snapshot_t1.weights();
  for (Eigen::Index i = 0; i < w0.outerSize(); ++i) {
    if (in_t1[i] < 0) continue;
    for (WeightMatrix::InnerIterator it(w0, i); it; ++it) {
      const auto j = it.col();
      if (in_t1[j] < 0 || !(it.value() > 0.0)) continue;
      const double later = w1.coeff(in_t1[i], in_t1[j]);
      if (!(later > 0.0)) continue;
      const double dxi = rel_dxi[i] + rel_dxi[j];
      if (!(1.0 + dxi > 0.0)) continue;
      const auto field = pair_field(params_t, in_params[i], in_params[j]);
      points.push_back({in_params[i], in_params[j], field.eta_ij, (later / t1) / (it.value() / t0) - 1.0, dxi});
    }
  }
  return points;
}

std::pair<int, int> fr_cell(double eta_ij, double rel_dxi_sum) {
  return {static_cast<int>(std::floor(std::log(eta_ij))) + 1, static_cast<int>(std::floor(100.0 * rel_dxi_sum)) + 1};
}

std::vector<FrBin> fr_bin_points(std::span<const FrPoint> points, const FrFilters& filters) {
  struct Acc {
    std::size_t count = 0;
    double log_dv = 0.0;
    double log_dxi = 0.0;
    double share = 0.0;
  };
  std::map<std::pair<int, int>, Acc> cells;
  for (const auto& p : points) {
    const double share = 1.0 / p.eta_ij;
    if (filters.min_expected_share && !(share > *filters.min_expected_share)) continue;
    auto& a = cells[fr_cell(p.eta_ij, p.rel_dxi_sum)];
    ++a.count;
    a.log_dv += std::log1p(p.rel_dv);
    a.log_dxi += std::log1p(p.rel_dxi_sum);
    a.share += share;
  }
  std::vector<FrBin> bins;
  for (const auto& [key, a] : cells) {
    if (filters.min_count && !(a.count > *filters.min_count)) continue;
    const double c = static_cast<double>(a.count);
    bins.push_back({key.first, key.second, a.count, std::expm1(a.log_dv / c), std::expm1(a.log_dxi / c), a.share / c});
  }
  return bins;
}

FrReport fr_report(std::span<const FrBin> bins) {
  if (bins.empty()) throw DataError("fr_report: no cells");
  FrReport r;
  r.cells.assign(bins.begin(), bins.end());
  std::map<int, FrAggregate> by_n;
  for (const auto& b : bins) {
    auto& a = by_n[b.n];
    a.n = b.n;
    ++a.cells;
    a.geo_mean_dxi += b.geo_mean_dxi;
    a.geo_mean_dv += b.geo_mean_dv;
  }
  for (auto& [n, a] : by_n) {
    a.geo_mean_dxi /= static_cast<double>(a.cells);
    a.geo_mean_dv /= static_cast<double>(a.cells);
    r.aggregates.push_back(a);
  }
  return r;
}

}  // namespace itn

#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itn/ensemble.hpp"
#include "itn/ingest.hpp"

namespace itn {

// ---------------------------------------------------------------------------
// Strength versus GDP

struct StrengthFit {
  int year = 0;
  double a_fit_out = 0.0;  // slope of s_out vs x through the origin
  double a_fit_in = 0.0;
  double a_theory = 0.0;  // T / X
  double loglog_slope_out = 0.0;
  double loglog_slope_in = 0.0;
  std::size_t countries_out = 0;  // countries with s_out > 0 used in the fit
  std::size_t countries_in = 0;
};

/// Least-squares fits of out- and in-strength against GDP over countries with
/// positive strength. Throws DataError when fewer than 3 qualify.
StrengthFit strength_fit(const Snapshot& snapshot);

/// Same fits from explicit strength vectors (e.g. ensemble averages).
StrengthFit strength_fit(int year, const Eigen::VectorXd& gdp, const Eigen::VectorXd& s_out,
                         const Eigen::VectorXd& s_in, double total_trade, double total_gdp);

// ---------------------------------------------------------------------------
// Flow cloud: observed w_ij against x_i x_j

inline constexpr double kReportingFloorMusd = 0.001;

struct CloudRow {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double gdp_product = 0.0;  // x_i x_j
  double observed = 0.0;     // w_ij
  double expected = 0.0;     // (T / X^2) x_i x_j
};

struct CloudBin {
  double lo = 0.0;  // bounds on x_i x_j
  double hi = 0.0;
  std::size_t count = 0;
  double mean_observed = 0.0;
  double mean_expected = 0.0;
};

struct FlowCloud {
  std::vector<CloudRow> rows;
  std::vector<CloudBin> bins;
};

/// Rows for every pair with w_ij > censor_threshold, plus means of observed
/// and expected w over `n_bins` logarithmic bins of x_i x_j.
FlowCloud flow_cloud(const Snapshot& snapshot, const EnsembleParams<double>& params, double censor_threshold,
                     std::size_t n_bins = 20);

// ---------------------------------------------------------------------------
// Volume distributions

enum class VolumeSource { real, simulated, expected };

std::string to_string(VolumeSource source);

struct VolumeHistogram {
  std::vector<double> edges;  // ascending, logarithmically spaced
  std::vector<double> density;
  std::vector<std::size_t> counts;
  std::size_t total = 0;  // values that fell inside the edges
  VolumeSource source = VolumeSource::real;

  /// sum density_k (edge_{k+1} - edge_k); 1 for any nonempty histogram.
  double integral() const;
};

/// Normalized log-binned density over [min, max] of the values. A constant
/// input is binned over [v/2, 2v] so its mass sits in one bin. Throws
/// DataError on empty input, ValueError on nonpositive values or n_bins < 5.
VolumeHistogram volume_distribution(std::span<const double> values, std::size_t n_bins,
                                    VolumeSource source = VolumeSource::real);

/// Same with caller-supplied edges; values outside them are ignored.
VolumeHistogram volume_distribution(std::span<const double> values, std::vector<double> edges,
                                    VolumeSource source);

/// Expected shares <v_ij> = xi_i xi_j over every directed pair.
std::vector<double> expected_shares(const EnsembleParams<double>& params);

/// Probability mass of each bin for a v drawn from a uniformly chosen pair's
/// exponential law, conditioned on landing inside [edges.front(), edges.back()].
std::vector<double> predicted_share_masses(const EnsembleParams<double>& params, std::span<const double> edges);

// ---------------------------------------------------------------------------
// Fluctuation-response test on consecutive years

struct FrPoint {
  Eigen::Index i = 0;  // indices into params_t
  Eigen::Index j = 0;
  double eta_ij = 0.0;
  double rel_dv = 0.0;       // v(t+1) / v(t) - 1
  double rel_dxi_sum = 0.0;  // dxi_i / xi_i + dxi_j / xi_j
};

/// One point per directed pair with positive v in both years among countries
/// present in both years. xi is renormalized over that common set in each
/// year. Pairs whose GDP factor 1 + rel_dxi_sum is not positive are skipped.
/// Throws DataError on an empty common set.
std::vector<FrPoint> fr_points(const Snapshot& snapshot_t, const Snapshot& snapshot_t1,
                               const EnsembleParams<double>& params_t);

struct FrFilters {
  std::optional<double> min_expected_share;  // keep points with <v_ij> > this
  std::optional<std::size_t> min_count;      // keep cells with count > this
};

struct FrBin {
  int m = 0;  // m - 1 <= ln eta < m
  int n = 0;  // n - 1 <= 100 rel_dxi_sum < n
  std::size_t count = 0;
  double geo_mean_dv = 0.0;   // exp(mean ln(1 + rel_dv)) - 1
  double geo_mean_dxi = 0.0;  // exp(mean ln(1 + rel_dxi_sum)) - 1
  double mean_expected_share = 0.0;
};

/// Cell (m, n) of a point.
std::pair<int, int> fr_cell(double eta_ij, double rel_dxi_sum);

/// Groups points into V(m, n) cells sorted by (m, n), geometric averages in
/// ratio space, then applies the filters.
std::vector<FrBin> fr_bin_points(std::span<const FrPoint> points, const FrFilters& filters = {});

struct FrAggregate {
  int n = 0;
  std::size_t cells = 0;
  double geo_mean_dxi = 0.0;  // arithmetic mean across m of the cells' values
  double geo_mean_dv = 0.0;
};

struct FrReport {
  std::vector<FrBin> cells;
  std::vector<FrAggregate> aggregates;  // one per n, ascending
};

/// Throws DataError on empty input.
FrReport fr_report(std::span<const FrBin> bins);

}  // namespace itn

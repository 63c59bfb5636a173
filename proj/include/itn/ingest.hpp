#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace itn {

/// Row-major sparse matrix of directed trade weights; absent entries are zero.
using WeightMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One row of the bilateral-flow input. Values in millions of USD.
struct FlowRecord {
  int year = 0;
  std::string exporter;
  std::string importer;
  double reported_export = 0.0;
  std::optional<double> reported_import;

  bool operator==(const FlowRecord&) const = default;
};

/// One row of the GDP input.
struct GdpRecord {
  int year = 0;
  std::string country;
  double gdp_per_capita = 0.0;  // USD
  double population = 0.0;      // persons

  /// Total GDP in millions of USD.
  double total_musd() const { return gdp_per_capita * (population / 1e6); }

  bool operator==(const GdpRecord&) const = default;
};

inline constexpr const char* kFlowsHeader = "year,exporter,importer,export_musd,import_musd";
inline constexpr const char* kGdpHeader = "year,country,gdp_pc_usd,population";

/// Parses the flows CSV. Throws FormatError on a malformed header or an
/// unparseable row, ValueError on negative flows, self-flows or duplicate
/// (year, exporter, importer) keys. Messages carry the line number.
std::vector<FlowRecord> parse_flows(std::istream& in);

/// Parses the GDP CSV. Throws ValueError on nonpositive values or a
/// duplicated (year, country) key.
std::vector<GdpRecord> parse_gdp(std::istream& in);

/// One year of the weighted directed trade network together with GDPs.
///
/// Immutable once built. Totals X = sum(x) and T = sum(w) are computed at
/// construction.
class Snapshot {
 public:
  /// Throws ValueError if dimensions disagree, the diagonal is nonzero, any
  /// weight is negative or any GDP is nonpositive; DataError if empty.
  Snapshot(int year, std::vector<std::string> countries, WeightMatrix weights, Eigen::VectorXd gdp);

  int year() const { return year_; }
  const std::vector<std::string>& countries() const { return countries_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(countries_.size()); }
  const WeightMatrix& weights() const { return weights_; }
  const Eigen::VectorXd& gdp() const { return gdp_; }
  double total_gdp() const { return total_gdp_; }
  double total_trade() const { return total_trade_; }

  /// s_out_i = sum_j w_ij
  Eigen::VectorXd out_strength() const;
  /// s_in_i = sum_j w_ji
  Eigen::VectorXd in_strength() const;

  /// Index of `code`, or -1.
  Eigen::Index index_of(const std::string& code) const;

 private:
  int year_;
  std::vector<std::string> countries_;
  WeightMatrix weights_;
  Eigen::VectorXd gdp_;
  double total_gdp_ = 0.0;
  double total_trade_ = 0.0;
};

struct SnapshotBuild {
  Snapshot snapshot;
  /// Trading countries dropped for lack of a GDP record, sorted.
  std::vector<std::string> dropped;
};

/// Resolves one year's records into a Snapshot.
///
/// Countries are every code with a GDP record for `year`, sorted. A pair
/// reported by both sides gets the mean of the two reports, otherwise the
/// single report. Countries that trade but have no GDP are dropped together
/// with their flows. Records for other years are ignored. Throws DataError
/// when no country survives.
SnapshotBuild build_snapshot(int year, std::span<const FlowRecord> flows, std::span<const GdpRecord> gdps);

/// Flow records reproducing a snapshot's weights (export only, import absent).
std::vector<FlowRecord> to_flow_records(const Snapshot& snapshot);
std::vector<GdpRecord> to_gdp_records(const Snapshot& snapshot);

/// Relative quantities: GDP shares, strength shares and weight shares.
struct RelativeView {
  Eigen::VectorXd xi;
  Eigen::VectorXd sigma_out;
  Eigen::VectorXd sigma_in;
  WeightMatrix v;
};

/// Throws DataError("degenerate snapshot") when T = 0.
RelativeView relative_view(const Snapshot& snapshot);

}  // namespace itn

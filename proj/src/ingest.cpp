#include "itn/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "itn/csv.hpp"
#include "itn/error.hpp"

namespace itn {

namespace {

std::string at_line(std::size_t line_no) { return " (line " + std::to_string(line_no) + ")"; }

template <typename Fn>
auto with_line(std::size_t line_no, Fn&& fn) {
  try {
    return fn();
  } catch (const FormatError& e) {
    throw FormatError(e.what() + at_line(line_no));
  }
}

int parse_year(std::string_view token) {
  const auto y = csv::parse_int(token);
  if (y < -100000 || y > 100000) throw FormatError("year out of range: " + std::string(token));
  return static_cast<int>(y);
}

}  // namespace

std::vector<FlowRecord> parse_flows(std::istream& in) {
  std::size_t line_no = 0;
  csv::expect_header(in, kFlowsHeader, line_no, "flows");

  std::vector<FlowRecord> records;
  std::set<std::tuple<int, std::string, std::string>> seen;
  std::string line;
  while (csv::next_record(in, line, line_no)) {
    const auto fields = csv::split(line);
    if (fields.size() != 5) {
      throw FormatError("flows: expected 5 fields, got " + std::to_string(fields.size()) + at_line(line_no));
    }
    FlowRecord r;
    with_line(line_no, [&] {
      r.year = parse_year(fields[0]);
      r.exporter = fields[1];
      r.importer = fields[2];
      r.reported_export = csv::parse_double(fields[3]);
      if (!fields[4].empty()) r.reported_import = csv::parse_double(fields[4]);
      return 0;
    });
    if (r.exporter.empty() || r.importer.empty()) throw FormatError("flows: empty country code" + at_line(line_no));
    if (r.exporter == r.importer) {
      throw ValueError("flows: self-flow for " + r.exporter + at_line(line_no));
    }
    if (!(r.reported_export >= 0.0) || !std::isfinite(r.reported_export) ||
        (r.reported_import && (!(*r.reported_import >= 0.0) || !std::isfinite(*r.reported_import)))) {
      throw ValueError("flows: negative or non-finite flow" + at_line(line_no));
    }
    if (!seen.emplace(r.year, r.exporter, r.importer).second) {
      throw ValueError("flows: duplicate key " + std::to_string(r.year) + "," + r.exporter + "," + r.importer +
                       at_line(line_no));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<GdpRecord> parse_gdp(std::istream& in) {
  std::size_t line_no = 0;
  csv::expect_header(in, kGdpHeader, line_no, "gdp");

  std::vector<GdpRecord> records;
  std::set<std::pair<int, std::string>> seen;
  std::string line;
  while (csv::next_record(in, line, line_no)) {
    const auto fields = csv::split(line);
    if (fields.size() != 4) {
      throw FormatError("gdp: expected 4 fields, got " + std::to_string(fields.size()) + at_line(line_no));
    }
    GdpRecord r;
    with_line(line_no, [&] {
      r.year = parse_year(fields[0]);
      r.country = fields[1];
      r.gdp_per_capita = csv::parse_double(fields[2]);
      r.population = csv::parse_double(fields[3]);
      return 0;
    });
    if (r.country.empty()) throw FormatError("gdp: empty country code" + at_line(line_no));
    if (!(r.gdp_per_capita > 0.0) || !(r.population > 0.0) || !std::isfinite(r.gdp_per_capita) ||
        !std::isfinite(r.population)) {
      throw ValueError("gdp: nonpositive gdp per capita or population for " + r.country + at_line(line_no));
    }
    if (!seen.emplace(r.year, r.country).second) {
      throw ValueError("gdp: duplicate key " + std::to_string(r.year) + "," + r.country + at_line(line_no));
    }
    records.push_back(std::move(r));
  }
  return records;
}

Snapshot::Snapshot(int year, std::vector<std::string> countries, WeightMatrix weights, Eigen::VectorXd gdp)
    : year_(year), countries_(std::move(countries)), weights_(std::move(weights)), gdp_(std::move(gdp)) {
  const auto n = size();
  if (n == 0) throw DataError("no usable countries");
  if (weights_.rows() != n || weights_.cols() != n || gdp_.size() != n) {
    throw ValueError("snapshot: dimension mismatch");
  }
  weights_.prune(0.0);
  weights_.makeCompressed();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(gdp_[i] > 0.0)) throw ValueError("snapshot: nonpositive GDP for " + countries_[i]);
    for (WeightMatrix::InnerIterator it(weights_, i); it; ++it) {
      if (it.col() == i) throw ValueError("snapshot: nonzero self-flow for " + countries_[i]);
      if (!(it.value() >= 0.0)) throw ValueError("snapshot: negative weight");
    }
  }
  total_gdp_ = gdp_.sum();
  total_trade_ = weights_.sum();
}

Eigen::VectorXd Snapshot::out_strength() const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(size());
  for (Eigen::Index i = 0; i < weights_.outerSize(); ++i) {
    for (WeightMatrix::InnerIterator it(weights_, i); it; ++it) s[i] += it.value();
  }
  return s;
}

Eigen::VectorXd Snapshot::in_strength() const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(size());
  for (Eigen::Index i = 0; i < weights_.outerSize(); ++i) {
    for (WeightMatrix::InnerIterator it(weights_, i); it; ++it) s[it.col()] += it.value();
  }
  return s;
}

Eigen::Index Snapshot::index_of(const std::string& code) const {
  const auto it = std::lower_bound(countries_.begin(), countries_.end(), code);
  if (it != countries_.end() && *it == code) return it - countries_.begin();
  // Not every snapshot is sorted (e.g. hand-built ones).
  const auto lin = std::find(countries_.begin(), countries_.end(), code);
  return lin == countries_.end() ? -1 : lin - countries_.begin();
}

SnapshotBuild build_snapshot(int year, std::span<const FlowRecord> flows, std::span<const GdpRecord> gdps) {
  std::map<std::string, double> gdp_by_country;
  for (const auto& g : gdps) {
    if (g.year != year) continue;
    if (!gdp_by_country.emplace(g.country, g.total_musd()).second) {
      throw ValueError("gdp: duplicate key " + std::to_string(year) + "," + g.country);
    }
  }
  if (gdp_by_country.empty()) throw DataError("no usable countries in " + std::to_string(year));

  std::vector<std::string> countries;
  Eigen::VectorXd x(static_cast<Eigen::Index>(gdp_by_country.size()));
  std::map<std::string, Eigen::Index> index;
  for (const auto& [code, value] : gdp_by_country) {
    index.emplace(code, static_cast<Eigen::Index>(countries.size()));
    x[static_cast<Eigen::Index>(countries.size())] = value;
    countries.push_back(code);
  }

  std::set<std::string> dropped;
  std::map<std::pair<Eigen::Index, Eigen::Index>, double> cells;
  for (const auto& f : flows) {
    if (f.year != year) continue;
    const auto ie = index.find(f.exporter);
    const auto ii = index.find(f.importer);
    if (ie == index.end()) dropped.insert(f.exporter);
    if (ii == index.end()) dropped.insert(f.importer);
    if (ie == index.end() || ii == index.end()) continue;
    const double w = f.reported_import ? 0.5 * (f.reported_export + *f.reported_import) : f.reported_export;
    if (!cells.emplace(std::pair{ie->second, ii->second}, w).second) {
      throw ValueError("flows: duplicate key " + std::to_string(year) + "," + f.exporter + "," + f.importer);
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(cells.size());
  for (const auto& [key, w] : cells) {
    if (w > 0.0) triplets.emplace_back(key.first, key.second, w);
  }
  const auto n = x.size();
  WeightMatrix w(n, n);
  w.setFromTriplets(triplets.begin(), triplets.end());

  return SnapshotBuild{Snapshot(year, std::move(countries), std::move(w), std::move(x)),
                       std::vector<std::string>(dropped.begin(), dropped.end())};
}

std::vector<FlowRecord> to_flow_records(const Snapshot& snapshot) {
  std::vector<FlowRecord> out;
  const auto& w = snapshot.weights();
  const auto& codes = snapshot.countries();
  for (Eigen::Index i = 0; i < w.outerSize(); ++i) {
    for (WeightMatrix::InnerIterator it(w, i); it; ++it) {
      out.push_back({snapshot.year(), codes[i], codes[it.col()], it.value(), std::nullopt});
    }
  }
  return out;
}

std::vector<GdpRecord> to_gdp_records(const Snapshot& snapshot) {
  std::vector<GdpRecord> out;
  for (Eigen::Index i = 0; i < snapshot.size(); ++i) {
    out.push_back({snapshot.year(), snapshot.countries()[i], snapshot.gdp()[i], 1e6});
  }
  return out;
}

RelativeView relative_view(const Snapshot& snapshot) {
  const double total = snapshot.total_trade();
  if (!(total > 0.0)) throw DataError("degenerate snapshot: total trade is zero");
  RelativeView view;
  view.xi = snapshot.gdp() / snapshot.total_gdp();
  view.v = snapshot.weights() / total;
  const auto n = snapshot.size();
  view.sigma_out = Eigen::VectorXd::Zero(n);
  view.sigma_in = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < view.v.outerSize(); ++i) {
    for (WeightMatrix::InnerIterator it(view.v, i); it; ++it) {
      view.sigma_out[i] += it.value();
      view.sigma_in[it.col()] += it.value();
    }
  }
  return view;
}

}  // namespace itn

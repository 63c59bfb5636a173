#include "itn/io.hpp"

#include "itn/error.hpp"

namespace itn::io {

CsvWriter::CsvWriter(const fs::path& path, const Metadata& metadata, std::string_view header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw DataError("cannot open for writing: " + path.string());
  for (const auto& [k, v] : metadata) out_ << "# " << k << '=' << v << '\n';
  out_ << header << '\n';
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw DataError("write failed: " + path_.string());
  out_.close();
}

const std::string& Table::meta(const std::string& key) const {
  const auto it = metadata.find(key);
  if (it == metadata.end()) throw FormatError("missing metadata '" + key + "'");
  return it->second;
}

Table read_table(const fs::path& path, std::string_view header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing file: " + path.string());
  Table t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        auto key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(' '));
        t.metadata[key] = line.substr(eq + 1);
      }
      continue;
    }
    if (!have_header) {
      if (line != header) {
        throw FormatError(path.string() + ": malformed header '" + line + "', expected '" + std::string(header) + "'");
      }
      have_header = true;
      continue;
    }
    t.rows.push_back(csv::split(line));
  }
  if (!have_header) throw FormatError(path.string() + ": missing header");
  return t;
}

fs::path snapshot_path(const fs::path& dir, int year) { return dir / ("snapshot-" + std::to_string(year) + ".csv"); }
fs::path countries_path(const fs::path& dir, int year) { return dir / ("countries-" + std::to_string(year) + ".csv"); }
fs::path params_path(const fs::path& dir, int year) { return dir / ("params-" + std::to_string(year) + ".csv"); }
fs::path sample_path(const fs::path& dir, int year, std::uint64_t seed) {
  return dir / ("sample-" + std::to_string(year) + "-" + std::to_string(seed) + ".csv");
}
fs::path metropolis_sample_path(const fs::path& dir, int year, std::uint64_t seed) {
  return dir / ("metropolis-" + std::to_string(year) + "-" + std::to_string(seed) + ".csv");
}
fs::path chain_path(const fs::path& dir, int year) { return dir / ("chain-" + std::to_string(year) + ".csv"); }

namespace {

Metadata with_year(int year, const Metadata& extra) {
  Metadata m{{"year", std::to_string(year)}};
  m.insert(m.end(), extra.begin(), extra.end());
  return m;
}

Eigen::Index parse_index(const std::string& token, Eigen::Index n, const fs::path& path) {
  const auto k = csv::parse_int(token);
  if (k < 0 || k >= n) throw FormatError(path.string() + ": index out of range: " + token);
  return static_cast<Eigen::Index>(k);
}

}  // namespace

void write_snapshot(const fs::path& dir, const Snapshot& snapshot, const Metadata& extra) {
  {
    CsvWriter w(countries_path(dir, snapshot.year()), with_year(snapshot.year(), {}), "country,x_i");
    for (Eigen::Index i = 0; i < snapshot.size(); ++i) w.row(snapshot.countries()[i], snapshot.gdp()[i]);
    w.close();
  }
  CsvWriter w(snapshot_path(dir, snapshot.year()), with_year(snapshot.year(), extra), "i,j,w_ij");
  const auto& m = snapshot.weights();
  for (Eigen::Index i = 0; i < m.outerSize(); ++i)
    for (WeightMatrix::InnerIterator it(m, i); it; ++it) w.row(static_cast<long>(i), static_cast<long>(it.col()), it.value());
  w.close();
}

Snapshot read_snapshot(const fs::path& dir, int year) {
  const auto cpath = countries_path(dir, year);
  const auto spath = snapshot_path(dir, year);
  if (!fs::exists(cpath) || !fs::exists(spath)) {
    throw DataError("missing snapshot for year " + std::to_string(year) + " in " + dir.string());
  }
  const auto ct = read_table(cpath, "country,x_i");
  std::vector<std::string> countries;
  Eigen::VectorXd x(static_cast<Eigen::Index>(ct.rows.size()));
  for (const auto& r : ct.rows) {
    if (r.size() != 2) throw FormatError(cpath.string() + ": expected 2 fields");
    x[static_cast<Eigen::Index>(countries.size())] = csv::parse_double(r[1]);
    countries.push_back(r[0]);
  }
  const auto n = x.size();
  const auto st = read_table(spath, "i,j,w_ij");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(st.rows.size());
  for (const auto& r : st.rows) {
    if (r.size() != 3) throw FormatError(spath.string() + ": expected 3 fields");
    triplets.emplace_back(parse_index(r[0], n, spath), parse_index(r[1], n, spath), csv::parse_double(r[2]));
  }
  WeightMatrix w(n, n);
  w.setFromTriplets(triplets.begin(), triplets.end());
  return Snapshot(year, std::move(countries), std::move(w), std::move(x));
}

void write_params(const fs::path& dir, const EnsembleParams<double>& params, const Metadata& extra) {
  Metadata m = with_year(params.year, {{"total_trade", csv::format(params.total_trade)},
                                       {"total_gdp", csv::format(params.total_gdp)}});
  m.insert(m.end(), extra.begin(), extra.end());
  CsvWriter w(params_path(dir, params.year), m, "country,x_i,xi_i,theta_i");
  const Eigen::VectorXd xi = params.shares();
  for (Eigen::Index i = 0; i < params.size(); ++i) w.row(params.countries[i], params.gdp[i], xi[i], params.theta[i]);
  w.close();
}

EnsembleParams<double> read_params(const fs::path& dir, int year) {
  const auto path = params_path(dir, year);
  if (!fs::exists(path)) throw DataError("missing params for year " + std::to_string(year) + ": " + path.string());
  const auto t = read_table(path, "country,x_i,xi_i,theta_i");
  EnsembleParams<double> p;
  p.year = year;
  p.total_trade = csv::parse_double(t.meta("total_trade"));
  p.total_gdp = csv::parse_double(t.meta("total_gdp"));
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  p.gdp.resize(n);
  p.theta.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = t.rows[static_cast<std::size_t>(i)];
    if (r.size() != 4) throw FormatError(path.string() + ": expected 4 fields");
    p.countries.push_back(r[0]);
    p.gdp[i] = csv::parse_double(r[1]);
    p.theta[i] = csv::parse_double(r[3]);
  }
  return p;
}

void write_sample(const fs::path& path, const SampledGraph& graph, const Metadata& extra) {
  Metadata m = with_year(graph.year, {{"seed", std::to_string(graph.seed)}, {"method", to_string(graph.method)}});
  m.insert(m.end(), extra.begin(), extra.end());
  CsvWriter w(path, m, "i,j,w_ij");
  const auto n = graph.weights.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) w.row(static_cast<long>(i), static_cast<long>(j), graph.weights(i, j));
  w.close();
}

Eigen::MatrixXd read_sample(const fs::path& path, Eigen::Index n) {
  const auto t = read_table(path, "i,j,w_ij");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& r : t.rows) {
    if (r.size() != 3) throw FormatError(path.string() + ": expected 3 fields");
    w(parse_index(r[0], n, path), parse_index(r[1], n, path)) = csv::parse_double(r[2]);
  }
  return w;
}

void write_chain(const fs::path& path, const std::vector<double>& trace, const Metadata& extra) {
  CsvWriter w(path, extra, "sweep,H");
  for (std::size_t k = 0; k < trace.size(); ++k) w.row(static_cast<long>(k), trace[k]);
  w.close();
}

}  // namespace itn::io

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "itn/csv.hpp"
#include "itn/ensemble.hpp"
#include "itn/ingest.hpp"
#include "itn/sampler.hpp"

namespace itn::io {

namespace fs = std::filesystem;

/// `# key=value` lines written above a table's header, in order.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Writes one CSV table: metadata comments, header, rows. Doubles use the
/// shortest round-trip representation so files reload bit-identically.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const Metadata& metadata, std::string_view header);

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << field(fields), first = false), ...);
    out_ << '\n';
  }

  /// Flushes and throws Error if any write failed.
  void close();

 private:
  template <typename T>
  static std::string field(const T& value) {
    if constexpr (std::is_floating_point_v<T>) {
      return csv::format(static_cast<double>(value));
    } else if constexpr (std::is_integral_v<T>) {
      return std::to_string(value);
    } else {
      return std::string(value);
    }
  }

  fs::path path_;
  std::ofstream out_;
};

/// Parsed table: metadata map plus data rows split into fields. Throws
/// DataError if the file is missing, FormatError on a header mismatch.
struct Table {
  std::map<std::string, std::string> metadata;
  std::vector<std::vector<std::string>> rows;

  const std::string& meta(const std::string& key) const;
};

Table read_table(const fs::path& path, std::string_view header);

fs::path snapshot_path(const fs::path& dir, int year);
fs::path countries_path(const fs::path& dir, int year);
fs::path params_path(const fs::path& dir, int year);
fs::path sample_path(const fs::path& dir, int year, std::uint64_t seed);
fs::path metropolis_sample_path(const fs::path& dir, int year, std::uint64_t seed);
fs::path chain_path(const fs::path& dir, int year);

void write_snapshot(const fs::path& dir, const Snapshot& snapshot, const Metadata& extra = {});
Snapshot read_snapshot(const fs::path& dir, int year);

void write_params(const fs::path& dir, const EnsembleParams<double>& params, const Metadata& extra = {});
EnsembleParams<double> read_params(const fs::path& dir, int year);

/// Rows `i,j,w_ij` for every off-diagonal entry.
void write_sample(const fs::path& path, const SampledGraph& graph, const Metadata& extra = {});
/// Dense n x n weights from a sample file.
Eigen::MatrixXd read_sample(const fs::path& path, Eigen::Index n);

/// Rows `sweep,H`.
void write_chain(const fs::path& path, const std::vector<double>& trace, const Metadata& extra = {});

}  // namespace itn::io

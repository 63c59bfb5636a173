#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace itn::csv {

// Minimal comma-separated reader for the project's own files. No quoting:
// every field is a bare token (country codes, numbers).

std::vector<std::string> split(std::string_view line);

/// Reads the next non-empty, non-comment ('#') line. Strips a trailing '\r'.
/// `line_no` is advanced past every physical line consumed.
bool next_record(std::istream& in, std::string& line, std::size_t& line_no);

/// Reads the header line and throws FormatError unless it equals `expected`.
void expect_header(std::istream& in, std::string_view expected, std::size_t& line_no,
                   std::string_view what);

double parse_double(std::string_view token);
long long parse_int(std::string_view token);

/// Shortest representation that round-trips to the same double.
std::string format(double value);

}  // namespace itn::csv

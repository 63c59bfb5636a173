#include "itn/csv.hpp"

#include <charconv>
#include <system_error>

#include "itn/error.hpp"

namespace itn::csv {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto piece = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    fields.emplace_back(trim(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool next_record(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    return true;
  }
  return false;
}

void expect_header(std::istream& in, std::string_view expected, std::size_t& line_no,
                   std::string_view what) {
  std::string line;
  if (!next_record(in, line, line_no)) {
    throw FormatError(std::string(what) + ": missing header, expected '" + std::string(expected) + "'");
  }
  // Tolerate a UTF-8 byte-order mark.
  std::string_view view = line;
  if (view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
  std::string normalized;
  for (const auto& f : split(view)) {
    if (!normalized.empty()) normalized += ',';
    normalized += f;
  }
  if (normalized != expected) {
    throw FormatError(std::string(what) + ": malformed header '" + std::string(view) + "', expected '" +
                      std::string(expected) + "'");
  }
}

double parse_double(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw FormatError("not a number: '" + std::string(token) + "'");
  }
  return value;
}

long long parse_int(std::string_view token) {
  token = trim(token);
  long long value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw FormatError("not an integer: '" + std::string(token) + "'");
  }
  return value;
}

std::string format(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace itn::csv

#ifndef AXHM_CSV_HPP
#define AXHM_CSV_HPP

#include <string>
#include <vector>

namespace axhm {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

/// Inverse of format_double; throws on malformed input.
double parse_double(const std::string& s);

/// Split one CSV line on commas (no quoting; fields never contain commas).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace axhm

#endif

#pragma once

#include <string>
#include <vector>

#include "fracdiff/dualities.hpp"
#include "fracdiff/grids.hpp"
#include "fracdiff/monotone.hpp"

namespace fracdiff {

/// Grid record:
///
///   {"origin": "1/2", "direction": "forward", "domain": "N_{1/2}",
///    "values": ["1", "-3/4", "0.125"]}
///
/// Numbers may be JSON strings (decimal or p/q, parsed exactly) or plain JSON
/// numbers. "domain" is written for information and ignored on input.
template <Scalar T>
GridFunction<T> parse_grid_json(const std::string& text);

/// Two columns "t,value" with consecutive integer t, optional header line.
/// Produces a forward grid.
template <Scalar T>
GridFunction<T> parse_grid_csv(const std::string& text);

/// JSON if the first non-blank character is '{', CSV otherwise.
template <Scalar T>
GridFunction<T> parse_grid(const std::string& text);

/// Single-line JSON record, newline terminated. Rationals are written as
/// exact decimals when possible, otherwise "p/q"; doubles with 17 digits.
template <Scalar T>
std::string grid_to_json(const GridFunction<T>& f);

/// One JSON line per identity.
std::string suite_report_line(const SuiteResult& r, const SuiteConfig& config);

/// One JSON line per theorem.
std::string theorem_report_line(const SearchResult& r, const SearchConfig& config);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fracdiff

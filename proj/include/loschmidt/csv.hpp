#pragma once

#include "loschmidt/model.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace loschmidt::csv {

/// 12 significant digits, `.` decimal point regardless of locale.
std::string format_number(double value);

/// Quotes a field when it holds a comma, quote or newline.
std::string escape_field(std::string_view field);

void write_series(std::ostream& out, const EchoSeries& series);
void write_series(const std::string& path, const EchoSeries& series);

/// Reads a `t,L` file. Malformed input throws ParseError carrying the 1-based line.
EchoSeries read_series(std::istream& in);
EchoSeries read_series(const std::string& path);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Flat `key=value` text, one entry per line, in the given order.
void write_sidecar(const std::string& path, const KeyValues& entries);

}  // namespace loschmidt::csv

#include "loschmidt/csv.hpp"

#include "loschmidt/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace loschmidt::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view field, int line) {
    field = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError("not a number: '" + std::string(field) + "'", line);
    }
    return value;
}

}  // namespace

std::string format_number(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    if (ec != std::errc()) {
        throw Error("cannot format number");
    }
    return {buf, ptr};
}

std::string escape_field(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

void write_series(std::ostream& out, const EchoSeries& series) {
    out << "t,L\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_number(series.times[i]) << ',' << format_number(series.values[i]) << '\n';
    }
}

void write_series(const std::string& path, const EchoSeries& series) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open " + path + " for writing");
    }
    write_series(out, series);
}

EchoSeries read_series(std::istream& in) {
    EchoSeries series;
    std::string text;
    int line = 0;
    bool header_seen = false;
    while (std::getline(in, text)) {
        ++line;
        const std::string_view row = trim(text);
        if (row.empty()) {
            continue;
        }
        if (!header_seen) {
            const auto comma = row.find(',');
            if (comma == std::string_view::npos || trim(row.substr(0, comma)) != "t" ||
                trim(row.substr(comma + 1)) != "L") {
                throw ParseError("expected header 't,L'", line);
            }
            header_seen = true;
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError("expected two comma-separated fields", line);
        }
        const double t = parse_number(row.substr(0, comma), line);
        const double value = parse_number(row.substr(comma + 1), line);
        if (!series.times.empty() && !(t > series.times.back())) {
            throw ParseError("times must be strictly increasing", line);
        }
        series.times.push_back(t);
        series.values.push_back(value);
    }
    if (!header_seen) {
        throw ParseError("empty input", line + 1);
    }
    return series;
}

EchoSeries read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    return read_series(in);
}

void write_sidecar(const std::string& path, const KeyValues& entries) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open " + path + " for writing");
    }
    for (const auto& [key, value] : entries) {
        out << key << '=' << value << '\n';
    }
}

}  // namespace loschmidt::csv

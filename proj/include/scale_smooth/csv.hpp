#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "step_function.hpp"

namespace scale_smooth {

/// Parse failure with the 1-based line it occurred on.
class CsvError : public std::runtime_error {
public:
    CsvError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
}

inline bool parse_double(const std::string& field, double& out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    // ERANGE underflow (subnormal tail values) is fine; overflow is not.
    if (errno == ERANGE && (out == HUGE_VAL || out == -HUGE_VAL)) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0';
}

}  // namespace detail

/// Reads `time,income` rows (UTF-8, '.' decimal separator, LF or CRLF).
/// Times must be strictly increasing; they are returned as-is, without
/// shifting the latest sample to the present.
inline std::vector<IncomeSample> parse_income_csv(std::istream& in) {
    std::string line;
    int line_no = 1;
    if (!std::getline(in, line)) throw CsvError(1, "empty file");
    if (line.rfind("\xef\xbb\xbf", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
    if (detail::trim(line) != "time,income") {
        throw CsvError(1, "expected header 'time,income'");
    }
    std::vector<IncomeSample> rows;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw CsvError(line_no, "expected exactly two comma-separated fields");
        }
        IncomeSample sample{};
        if (!detail::parse_double(detail::trim(line.substr(0, comma)), sample.time)) {
            throw CsvError(line_no, "malformed time value");
        }
        if (!detail::parse_double(detail::trim(line.substr(comma + 1)), sample.income)) {
            throw CsvError(line_no, "malformed income value");
        }
        if (!rows.empty() && !(sample.time > rows.back().time)) {
            throw CsvError(line_no, "times must be strictly increasing");
        }
        rows.push_back(sample);
    }
    if (rows.empty()) throw CsvError(line_no, "no data rows");
    return rows;
}

/// 17 significant digits: every finite double round-trips bit-exactly.
inline std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

struct ValueRow {
    double scale;
    double x;
    double value;
};

inline void write_value_csv(std::ostream& out, const std::vector<ValueRow>& rows) {
    out << "scale,x,value\n";
    for (const auto& row : rows) {
        out << format_double(row.scale) << ',' << format_double(row.x) << ','
            << format_double(row.value) << '\n';
    }
}

inline std::vector<ValueRow> parse_value_csv(std::istream& in) {
    std::string line;
    int line_no = 1;
    if (!std::getline(in, line) || detail::trim(line) != "scale,x,value") {
        throw CsvError(1, "expected header 'scale,x,value'");
    }
    std::vector<ValueRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw CsvError(line_no, "expected three comma-separated fields");
        }
        ValueRow row{};
        if (!detail::parse_double(line.substr(0, c1), row.scale) ||
            !detail::parse_double(line.substr(c1 + 1, c2 - c1 - 1), row.x) ||
            !detail::parse_double(line.substr(c2 + 1), row.value)) {
            throw CsvError(line_no, "malformed numeric field");
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace scale_smooth

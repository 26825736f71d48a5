#include "xcsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "xcsim/errors.hpp"

namespace xcsim::csv {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    out.push_back(std::move(current));
    return out;
}

std::vector<Row> read_rows(const std::string& path, const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path + ": empty file, expected header '" + expected_header + "'");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != expected_header) {
        throw ParseError(path + ": line 1: expected header '" + expected_header + "', got '" +
                         line + "'");
    }
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        rows.push_back(Row{line_no, split_fields(line)});
    }
    return rows;
}

std::uint64_t parse_u64(const std::string& field, std::size_t line_no, const std::string& column) {
    const std::string where = "line " + std::to_string(line_no) + ": column '" + column + "'";
    if (field.empty()) {
        throw ParseError(where + " is empty, expected a non-negative integer");
    }
    if (field.front() == '-') {
        throw ParseError(where + ": negative value '" + field + "' not allowed");
    }
    std::uint64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(where + ": '" + field + "' is not a valid non-negative integer");
    }
    return value;
}

double parse_double(const std::string& field, std::size_t line_no, const std::string& column) {
    const std::string where = "line " + std::to_string(line_no) + ": column '" + column + "'";
    if (field.empty()) {
        throw ParseError(where + " is empty, expected a number");
    }
    double value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw ParseError(where + ": '" + field + "' is not a valid finite number");
    }
    return value;
}

std::string format_double(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) {
        throw Error("cannot format double");
    }
    return std::string(buffer, ptr);
}

}  // namespace xcsim::csv

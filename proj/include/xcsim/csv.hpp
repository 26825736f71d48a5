#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xcsim::csv {

// One data row: 1-based line number in the source file plus its fields.
struct Row {
    std::size_t line_no = 0;
    std::vector<std::string> fields;
};

// Splits on ',' with no quoting; fields in our formats never contain commas.
std::vector<std::string> split_fields(const std::string& line);

// Reads a CSV file, requires the first line to equal `expected_header`
// exactly, and returns the remaining non-empty lines split into fields.
// Throws IoError if the file cannot be opened and ParseError on a bad header.
std::vector<Row> read_rows(const std::string& path, const std::string& expected_header);

// Strict numeric field parsers; errors name the line and column.
std::uint64_t parse_u64(const std::string& field, std::size_t line_no, const std::string& column);
double parse_double(const std::string& field, std::size_t line_no, const std::string& column);

// Shortest decimal form that round-trips through a double.
std::string format_double(double value);

}  // namespace xcsim::csv

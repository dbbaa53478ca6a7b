#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace collabnet::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  // Column position by header name, or nullopt when absent.
  std::optional<std::size_t> column(std::string_view name) const;
};

// Parses RFC-4180 style delimited text. Quoted fields may contain the
// delimiter, doubled quotes and newlines. A leading UTF-8 BOM is skipped,
// CRLF line ends are accepted and blank lines are ignored.
Table parse(std::string_view text, char delimiter = ',');

// Reads and parses a file; throws Error(io) when it cannot be opened.
Table read_file(const std::string& path, char delimiter = ',');

std::string read_text(const std::string& path);
void write_text(const std::string& path, std::string_view text);

// Quotes a field only when it contains the delimiter, a quote or a newline.
std::string escape(std::string_view field, char delimiter = ',');

void append_row(std::string& out, const std::vector<std::string>& fields,
                char delimiter = ',');

// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

std::optional<double> parse_number(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace collabnet::csv

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace openness::csv {

using Row = std::vector<std::string>;

/// RFC 4180 style: comma separated, '"' quoting with "" escapes, CRLF or LF
/// line endings. A UTF-8 byte-order mark is skipped. Blank lines are dropped.
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

/// Joins escaped fields with ',' and terminates with '\n'.
std::string format_row(std::span<const std::string> fields);

/// Fixed-point with 6 decimals; negative zero prints as 0.000000.
std::string fixed6(double value);

/// fixed6 or an empty field when absent.
std::string fixed6(const std::optional<double>& value);

/// Parses a numeric field; empty means missing. Throws FormatError otherwise.
std::optional<double> parse_number(std::string_view field);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace openness::csv

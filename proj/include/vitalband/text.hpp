#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vitalband {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

// Splits one CSV line. Fields may be double-quoted; "" inside quotes is a
// literal quote. No multi-line fields.
std::vector<std::string> split_csv_line(std::string_view line);

// Quotes a field if it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

// Fixed two-decimal formatting used for all SVG coordinates. Negative zero
// is normalized to "0.00".
std::string fmt2(double v);

// fmt2 with trailing zeros (and a bare '.') stripped: 70 -> "70", 36.8 -> "36.8".
std::string fmt_trim(double v);

// Shortest representation that round-trips the double, via std::to_chars.
std::string fmt_shortest(double v);

} // namespace vitalband

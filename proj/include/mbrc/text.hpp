#pragma once

// Locale-independent number text and minimal CSV helpers shared by the
// readers, writers and the CLI.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mbrc::text {

/// Shortest representation that parses back to the same double.
/// Infinities are written as "inf" / "-inf".
std::string format_double(double value);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Quotes a CSV field when it contains a separator, quote or line break.
std::string csv_field(std::string_view s);

}  // namespace mbrc::text

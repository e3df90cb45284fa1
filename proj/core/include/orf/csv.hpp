#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orf::csv {

/// Fixed-point formatting that ignores the global locale and never prints "-0".
std::string number(double value, int decimals);
/// Empty field for a missing value.
std::string number(const std::optional<double>& value, int decimals);

/// Joins fields with commas and appends '\n'. Fields must not contain commas.
std::string row(const std::vector<std::string>& fields);

/// Splits one line on commas; empty fields are kept.
std::vector<std::string> split(std::string_view line);

/// Parses a decimal field, throwing std::invalid_argument on junk.
double parse_number(std::string_view field);

/// Writes `content` to `path` in binary mode. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace orf::csv

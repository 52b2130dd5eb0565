#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polysieve {

/// Shortest text that still carries 17 significant digits, '.' decimal point.
std::string format_double(double v);

/// Strict parse of a whole token; throws InputError on trailing garbage.
double parse_double(std::string_view token);

/// Comma-separated row of format_double() values.
std::string csv_row(std::span<const double> values);

/// Splits on `sep`, trimming ASCII whitespace around each field.
std::vector<std::string> split_fields(std::string_view line, char sep = ',');

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

/// Single-column observation files: optional non-numeric header, one value per line.
std::vector<double> read_observations_csv(const std::filesystem::path& path);
void write_observations_csv(const std::filesystem::path& path, std::span<const double> data);

}  // namespace polysieve

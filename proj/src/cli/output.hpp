#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hazardlens::cli {

enum class Format { json, csv, svg };

Format parse_format(std::string_view name);
std::string_view format_name(Format format);

/// --format wins, then HAZARDLENS_FORMAT (when the command supports it), then
/// the command default. An explicit unsupported --format is a usage error.
Format resolve_format(const std::string& flag, std::initializer_list<Format> supported,
                      Format fallback);

/// Six significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string csv_number(double x);

/// Finite numbers as-is; non-finite values become the strings "inf", "-inf", "nan".
nlohmann::json json_number(double x);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

/// Writes to the file at `path`, or to `fallback` when path is empty.
void emit(const std::string& path, std::ostream& fallback, const std::string& payload);

/// Comma-separated list of reals.
std::vector<double> parse_list(std::string_view text);

/// `start:stop:step`, inclusive of stop up to rounding.
std::vector<double> parse_range(std::string_view text);

}  // namespace hazardlens::cli

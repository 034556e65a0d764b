#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ikwsms/dataset.hpp"

namespace ikwsms::io {

struct LoadReport {
  std::size_t rows = 0;
  std::vector<std::string> columns;
};

/// CSV with header `y,x1,x2,...,v` (x columns in order, v last is not required
/// but the names are). Throws ParseError with the 1-based data row and column.
Dataset load_dataset(const std::filesystem::path& path, LoadReport* report = nullptr);
Dataset parse_dataset(const std::string& text, LoadReport* report = nullptr);

std::string format_dataset(const Dataset& data);
void save_dataset(const Dataset& data, const std::filesystem::path& path);

// Names of the coefficients on x_tilde: x2, x3, ...
std::vector<std::string> coefficient_names(const Dataset& data);

// Shortest round-trip decimal representation.
std::string format_double(double x);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace ikwsms::io

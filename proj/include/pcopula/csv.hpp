#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pcop {

/// "%.17g": round-trips every double.
std::string format_g17(double value);

/// Shortest decimal that round-trips (for labels and descriptions).
std::string format_short(double value);

/// Comma-joined cells, quoted when they hold a comma or quote; numeric
/// cells are expected pre-formatted.
std::string csv_line(const std::vector<std::string>& cells);

/// Writes header + rows with '\n' line endings; throws InputError when
/// the file cannot be opened.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws InputError naming the column.
  std::size_t column(std::string_view name) const;
  std::vector<double> numeric_column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace pcop

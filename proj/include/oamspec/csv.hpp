#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace oamspec {

/// Headered CSV table with RFC 4180 quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws std::invalid_argument if absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
std::string format_csv(const CsvTable& table);

CsvTable read_csv(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Parses a finite double, rejecting trailing garbage.
double parse_double(std::string_view field);

}  // namespace oamspec

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homflow {

/// "%.17g"; reads back to the identical double. nan and inf are spelled out.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws ConfigError if absent.
  std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);

/// Writes to `path`, or to `fallback` when path is empty. Throws IoError.
void write_csv(const std::string& path, const CsvTable& table, std::ostream& fallback);

CsvTable parse_csv(std::istream& is);

/// Throws IoError when the file cannot be opened, ConfigError on malformed content.
CsvTable read_csv(const std::string& path);

}  // namespace homflow

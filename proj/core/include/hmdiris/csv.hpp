#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace hmdiris {

/// Shortest round-trip decimal form; "inf" / "-inf" / "nan" for non-finite.
std::string format_double(double v);

/// Fixed-precision decimal form, e.g. for percentages.
std::string format_fixed(double v, int decimals);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void row(const std::vector<std::string>& fields);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by header name; throws Io when missing.
  std::size_t column(std::string_view name) const;
};

/// Minimal reader for files written by CsvWriter (quoted fields supported).
CsvTable read_csv(const std::filesystem::path& path);

double parse_double(std::string_view s);
long long parse_int(std::string_view s);

}  // namespace hmdiris

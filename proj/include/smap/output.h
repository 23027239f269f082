// Plot-ready tables and the per-run manifest.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace smap {

enum class OutputFormat { kCsv, kJson };

OutputFormat parse_format(std::string_view name);
std::string format_name(OutputFormat format);

// Numeric table; NaN cells are written as "nan" in CSV and null in JSON.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

// Doubles are printed with 17 significant digits.
std::string format_double(double v);

std::string render_csv(const Table& table);
std::string render_json(const Table& table);

// Writes <dir>/<name>.csv or .json and returns the path. Throws
// std::runtime_error on I/O failure.
std::filesystem::path write_table(const Table& table, const std::filesystem::path& dir,
                                  OutputFormat format);

// SHA-1 over "blob <size>\0" + content, as git computes object ids.
std::string git_blob_sha1(std::string_view content);
std::string git_blob_sha1_file(const std::filesystem::path& path);

}  // namespace smap

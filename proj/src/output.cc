#include "smap/output.h"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace smap {

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown output format '" + std::string(name) +
                              "' (expected csv or json)");
}

std::string format_name(OutputFormat format) {
  return format == OutputFormat::kCsv ? "csv" : "json";
}

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("table '" + name + "': row width does not match header");
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Table& table) {
  // Written by hand so every number keeps 17 significant digits.
  std::ostringstream out;
  out << "{\n  \"name\": \"" << table.name << "\",\n  \"columns\": [";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? ", " : "") << '"' << table.columns[c] << '"';
  }
  out << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n    [" : "\n    [");
    const auto& row = table.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double v = row[c];
      out << (c ? ", " : "") << (std::isfinite(v) ? format_double(v) : std::string("null"));
    }
    out << ']';
  }
  out << (table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

std::filesystem::path write_table(const Table& table, const std::filesystem::path& dir,
                                  OutputFormat format) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / (table.name + "." + format_name(format));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << (format == OutputFormat::kCsv ? render_csv(table) : render_json(table));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  return path;
}

std::string git_blob_sha1(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string git_blob_sha1_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return git_blob_sha1(buf.str());
}

}  // namespace smap

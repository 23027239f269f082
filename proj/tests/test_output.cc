#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "smap/output.h"

namespace smap {
namespace {

Table sample_table() {
  Table t{"demo", {"h", "error"}, {}};
  t.add_row({0.5, 0.1});
  t.add_row({0.25, std::numeric_limits<double>::quiet_NaN()});
  return t;
}

TEST(Table, RejectsRowOfWrongWidth) {
  Table t{"demo", {"a", "b"}, {}};
  EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);
}

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Render, Csv) {
  EXPECT_EQ(render_csv(sample_table()), "h,error\n0.5,0.10000000000000001\n0.25,nan\n");
}

TEST(Render, JsonParsesAndMapsNanToNull) {
  const auto j = nlohmann::json::parse(render_json(sample_table()));
  EXPECT_EQ(j["name"], "demo");
  EXPECT_EQ(j["columns"], (nlohmann::json{"h", "error"}));
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][0][1].get<double>(), 0.1);
  EXPECT_TRUE(j["rows"][1][1].is_null());
  const auto empty = nlohmann::json::parse(render_json(Table{"e", {"x"}, {}}));
  EXPECT_TRUE(empty["rows"].empty());
}

TEST(Format, ParseAndName) {
  EXPECT_EQ(parse_format("csv"), OutputFormat::kCsv);
  EXPECT_EQ(parse_format("json"), OutputFormat::kJson);
  EXPECT_EQ(format_name(OutputFormat::kJson), "json");
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(WriteTable, CreatesDirectoryAndFile) {
  const auto dir = std::filesystem::temp_directory_path() / "smap_test_write_table" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  const auto path = write_table(sample_table(), dir, OutputFormat::kCsv);
  EXPECT_EQ(path.filename(), "demo.csv");
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  EXPECT_EQ(s.str(), render_csv(sample_table()));
  EXPECT_EQ(git_blob_sha1_file(path), git_blob_sha1(s.str()));
}

TEST(GitBlobSha1, KnownObjectIds) {
  EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_THROW(git_blob_sha1_file("/nonexistent/smap"), std::runtime_error);
}

}  // namespace
}  // namespace smap

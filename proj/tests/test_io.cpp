#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "pswitch/csv.hpp"
#include "pswitch/manifest.hpp"
#include "pswitch/svg.hpp"

namespace {

using namespace pswitch;

TEST(CsvFormat, ShortestRoundTripNumbers) {
  EXPECT_EQ(csv::format_double(0.1), "0.1");
  EXPECT_EQ(csv::format_double(1550.0), "1550");
  EXPECT_EQ(csv::format_double(-2.5), "-2.5");
  EXPECT_EQ(csv::format_int(42), "42");
  EXPECT_EQ(csv::format_int(-7), "-7");

  for (double v : {1.0 / 3.0, 0.9639331539981566, 1e-300, 6.28318530717958648,
                   -0.0, 12345678901234567.0}) {
    const double back = std::stod(csv::format_double(v));
    EXPECT_EQ(back, v) << csv::format_double(v);
  }
}

TEST(CsvFormat, EscapesOnlyWhenNeeded) {
  EXPECT_EQ(csv::escape("plain-label_1"), "plain-label_1");
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv::escape("two\nlines"), "\"two\nlines\"");
}

TEST(CsvWrite, ProducesExpectedBytes) {
  csv::Table t;
  t.header = {"x", "label"};
  t.rows = {{"1.5", "plain"}, {"2", "with,comma"}};
  std::ostringstream ss;
  csv::write(ss, t);
  EXPECT_EQ(ss.str(), "x,label\n1.5,plain\n2,\"with,comma\"\n");
}

TEST(CsvWrite, RowWidthMismatchThrows) {
  csv::Table t;
  t.header = {"a", "b"};
  t.rows = {{"1"}};
  std::ostringstream ss;
  EXPECT_THROW(csv::write(ss, t), validation_error);
}

TEST(CsvRead, RoundTripsQuotedFields) {
  csv::Table t;
  t.header = {"x", "label"};
  t.rows = {{"1", "a,b"}, {"2", "say \"hi\""}, {"3", ""}};
  std::ostringstream ss;
  csv::write(ss, t);
  std::istringstream in(ss.str());
  const csv::Table back = csv::read(in);
  EXPECT_EQ(back.header, t.header);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    EXPECT_EQ(back.rows[i], t.rows[i]) << "row " << i;
}

TEST(CsvRead, UnterminatedQuoteThrows) {
  std::istringstream in("a,b\n1,\"oops\n");
  EXPECT_THROW(csv::read(in), config_error);
}

svg::Series make_series(const std::string& label, std::vector<double> x,
                        std::vector<double> y) {
  svg::Series s;
  s.label = label;
  s.x = std::move(x);
  s.y = std::move(y);
  return s;
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

TEST(Svg, WellFormedPlotWithLegend) {
  svg::PlotSpec spec;
  spec.title = "demo plot";
  spec.x_label = "x axis";
  spec.y_label = "y axis";
  std::ostringstream ss;
  svg::write_plot(ss, spec,
                  {make_series("first", {0, 1, 2}, {0.0, 0.5, 1.0}),
                   make_series("second", {0, 1, 2}, {1.0, 0.5, 0.0})});
  const std::string out = ss.str();
  EXPECT_EQ(out.rfind("<svg", 0), 0u);
  EXPECT_NE(out.find("</svg>"), std::string::npos);
  EXPECT_NE(out.find("demo plot"), std::string::npos);
  EXPECT_NE(out.find("x axis"), std::string::npos);
  EXPECT_NE(out.find("y axis"), std::string::npos);
  EXPECT_NE(out.find("first"), std::string::npos);
  EXPECT_NE(out.find("second"), std::string::npos);
  EXPECT_EQ(count_occurrences(out, "<polyline"), 2);
}

TEST(Svg, SplitsLineAtNonFinitePoints) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  svg::PlotSpec spec;
  std::ostringstream ss;
  svg::write_plot(ss, spec,
                  {make_series("gap", {0, 1, 2, 3, 4},
                               {0.0, 1.0, nan, 1.0, 0.0})});
  EXPECT_EQ(count_occurrences(ss.str(), "<polyline"), 2);
}

TEST(Svg, LogAxisNeedsPositiveX) {
  svg::PlotSpec spec;
  spec.log_x = true;
  std::ostringstream ss;
  EXPECT_THROW(
      svg::write_plot(ss, spec, {make_series("s", {0, 1}, {0.0, 1.0})}),
      validation_error);
  std::ostringstream ok;
  svg::write_plot(ok, spec, {make_series("s", {1, 10, 100}, {0, 1, 0})});
  EXPECT_NE(ok.str().find("<polyline"), std::string::npos);
}

TEST(Svg, NoFiniteDataThrows) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  svg::PlotSpec spec;
  std::ostringstream ss;
  EXPECT_THROW(svg::write_plot(ss, spec, {make_series("s", {nan}, {nan})}),
               validation_error);
}

TEST(Checksum, Fnv1a64KnownVectors) {
  EXPECT_EQ(fnv1a64("", 0), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a", 1), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar", 6), 0x85944171f73967e8ULL);
  EXPECT_EQ(hex64(0xcbf29ce484222325ULL), "cbf29ce484222325");
  EXPECT_EQ(hex64(0x1ULL), "0000000000000001");
}

TEST(Checksum, FileChecksumMatchesBuffer) {
  const auto path = std::filesystem::temp_directory_path() /
                    "pswitch_checksum_probe.bin";
  std::string payload = "line one\nline two\n\xff binary-ish";
  payload.push_back('\0');  // embedded NUL must not truncate the checksum
  {
    std::ofstream out(path, std::ios::binary);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  EXPECT_EQ(fnv1a64_file(path), fnv1a64(payload.data(), payload.size()));
  std::filesystem::remove(path);
  EXPECT_THROW(fnv1a64_file(path), config_error);
}

TEST(Manifest, JsonCarriesToolVersionAndOutputs) {
  RunManifest m;
  m.name = "demo";
  m.experiment = "spectrum";
  m.seed = 9;
  m.wall_ms = 12;
  m.config = {{"experiment", "spectrum"}};
  m.outputs.push_back({"demo_spectrum.csv", 120, 0xdeadbeefULL});
  const nlohmann::json j = manifest_to_json(m);
  EXPECT_EQ(j.at("tool"), "simulate");
  EXPECT_EQ(j.at("version"), version_string);
  EXPECT_EQ(j.at("name"), "demo");
  EXPECT_EQ(j.at("seed"), 9);
  ASSERT_EQ(j.at("outputs").size(), 1u);
  EXPECT_EQ(j.at("outputs")[0].at("file"), "demo_spectrum.csv");
  EXPECT_EQ(j.at("outputs")[0].at("bytes"), 120);
  EXPECT_EQ(j.at("outputs")[0].at("fnv1a64"), "00000000deadbeef");
}

}  // namespace

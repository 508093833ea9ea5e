#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plab/config.hpp"
#include "plab/errors.hpp"
#include "plab/report.hpp"

using namespace plab;

TEST(Config, ParsesSectionsAndComments) {
  const KeyValueConfig cfg = KeyValueConfig::parse(
      "seed = 7  # trailing comment\n"
      "\n"
      "[profile]\n"
      "p = 2.5\n"
      "[problem]\n"
      "grids = 32, 64,128\n");
  EXPECT_EQ(cfg.get_int("seed"), 7);
  EXPECT_DOUBLE_EQ(cfg.get_double("profile.p"), 2.5);
  EXPECT_EQ(cfg.get_doubles("problem.grids"), (std::vector<double>{32, 64, 128}));
  EXPECT_EQ(cfg.get_string("missing", "x"), "x");
  EXPECT_THROW(cfg.get_double("missing"), InvalidInput);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(KeyValueConfig::parse("no equals sign\n"), InvalidInput);
  EXPECT_THROW(KeyValueConfig::parse("[open\n"), InvalidInput);
  EXPECT_THROW(KeyValueConfig::parse(" = 3\n"), InvalidInput);
  EXPECT_THROW(parse_double("1.5x"), InvalidInput);
  EXPECT_THROW(parse_int("2.0"), InvalidInput);
  EXPECT_THROW(KeyValueConfig::parse("a = b\n").get_double("a"), InvalidInput);
}

TEST(Csv, HeaderVersionAndQuoting) {
  CsvTable t("demo", {"name", "value", "count"});
  t.add_row({std::string("a,b"), 0.1, std::int64_t{3}});
  t.add_row({std::string("say \"hi\""), 1e-300, std::int64_t{-1}});
  EXPECT_EQ(t.str(),
            "# plab-csv v1 demo\n"
            "name,value,count\n"
            "\"a,b\",0.10000000000000001,3\n"
            "\"say \"\"hi\"\"\",1e-300,-1\n");
  EXPECT_THROW(t.add_row({0.0}), InvalidInput);
  EXPECT_THROW(CsvTable("x", {}), InvalidInput);
}

TEST(Csv, NanHasOneSpelling) {
  CsvTable t("n", {"a", "b"});
  t.add_row({std::nan(""), -std::nan("")});
  EXPECT_EQ(t.str(), "# plab-csv v1 n\na,b\nnan,nan\n");
}

TEST(Csv, DoublesRoundTrip) {
  CsvTable t("rt", {"v"});
  const double v = 0.1 + 0.2;
  t.add_row({v});
  std::istringstream is(t.str());
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  std::getline(is, line);
  EXPECT_EQ(parse_double(line), v);
}

TEST(Checks, FormattingAndOutcome) {
  EXPECT_TRUE(check_le("a", 1.0, 1.0).passed);
  EXPECT_FALSE(check_ge("b", 0.5, 1.0).passed);
  EXPECT_TRUE(check_in("c", 2.0, 1.0, 3.0).passed);
  EXPECT_EQ(format_check(check_le("residual", 2e-13, 1e-12)), "PASS residual: 2e-13 <= 1e-12");
  EXPECT_EQ(format_check(check_true("converged", false)), "FAIL converged: 0 is true");
}

TEST(Report, WritesFilesAtomically) {
  const auto dir = std::filesystem::temp_directory_path() / "plab_report_test";
  std::filesystem::remove_all(dir);
  ExperimentReport rep;
  rep.name = "demo";
  CsvTable t("demo", {"x"});
  t.add_row({1.0});
  rep.tables.emplace_back("demo.csv", t);
  SvgChart chart;
  chart.title = "a < b";
  chart.log_y = true;
  chart.series.push_back({"s", {1, 2, 3}, {1, 0.1, 0.0}});
  rep.charts.emplace_back("demo.svg", chart);
  rep.checks.push_back(check_le("x", 1, 2));
  EXPECT_TRUE(rep.passed());
  rep.write(dir.string());

  std::ifstream csv(dir / "demo.csv");
  std::stringstream ss;
  ss << csv.rdbuf();
  EXPECT_EQ(ss.str(), t.str());
  EXPECT_FALSE(std::filesystem::exists(dir / "demo.csv.tmp"));
  std::ifstream svg(dir / "demo.svg");
  std::stringstream sv;
  sv << svg.rdbuf();
  EXPECT_NE(sv.str().find("a &lt; b"), std::string::npos);
  EXPECT_NE(sv.str().find("<polyline"), std::string::npos);
  std::filesystem::remove_all(dir);

  rep.checks.push_back(check_le("y", 3, 2));
  EXPECT_FALSE(rep.passed());
}

#pragma once

// Experiment outputs: budget checks, CSV tables with a versioned header line,
// and minimal SVG line charts.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace plab {

/// Every CSV starts with "# plab-csv v<kCsvVersion> <schema>".
inline constexpr int kCsvVersion = 1;

struct Check {
  std::string name;
  double measured = 0.0;
  std::string relation;  // "<=", ">=", "in", ...
  std::string budget;    // printable budget
  bool passed = false;
};

Check check_le(std::string name, double measured, double budget);
Check check_ge(std::string name, double measured, double budget);
Check check_in(std::string name, double measured, double lo, double hi);
Check check_true(std::string name, bool ok, double measured = 0.0);

/// "PASS|FAIL name: measured <relation> budget".
std::string format_check(const Check& c);

class CsvTable {
 public:
  using Cell = std::variant<std::string, double, std::int64_t>;

  CsvTable(std::string schema, std::vector<std::string> columns);
  void add_row(std::vector<Cell> row);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  /// Doubles are printed with %.17g; strings containing separators are quoted.
  std::string str() const;

 private:
  std::string schema_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgChart {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

/// Standalone SVG document; nonpositive values are dropped on log axes.
std::string render_svg(const SvgChart& chart);

/// Writes `text` to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& text);

struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, CsvTable>> tables;  // file name -> table
  std::vector<std::pair<std::string, SvgChart>> charts;  // file name -> chart
  std::vector<Check> checks;

  bool passed() const;
  /// Creates `dir` if needed and writes every table and chart into it.
  void write(const std::string& dir) const;
};

}  // namespace plab

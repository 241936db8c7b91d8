#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ccl {

// A cell is a number, a string, or null (written as an empty field).
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t column(std::string_view name) const;  // throws InvalidParam

  // Throws ShapeMismatch if the row has the wrong width.
  void add_row(std::vector<Cell> row);
  // Lexicographic on the cell order; null < number < string.
  void sort_rows();

  const Cell& at(std::size_t row, std::string_view column) const;
  std::optional<double> number(std::size_t row, std::string_view column) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

Cell null_cell();
Cell opt_cell(const std::optional<double>& v);

std::string format_cell(const Cell& c);

// Header row, then one line per row. Doubles use the shortest round-trip
// representation, so the output is a pure function of the values.
void emit_csv(const ResultTable& table, const std::filesystem::path& path);

struct PlotSeries {
  std::string x_column;
  std::string y_column;
  std::string title;
  // (column, value): only rows whose cell text equals value in every listed
  // column are drawn.
  std::vector<std::pair<std::string, std::string>> filters;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string output;  // png written by the script
  std::vector<PlotSeries> series;
  bool log_y = false;
};

// gnuplot command file plotting columns of `csv_name`. gnuplot resolves the
// name against its working directory, so run it from the output directory.
void emit_plot_script(const ResultTable& table, const std::string& csv_name,
                      const PlotSpec& spec, const std::filesystem::path& path);

}  // namespace ccl

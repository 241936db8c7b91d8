#include "ccl/results.hpp"

#include <algorithm>
#include <fstream>

#include "ccl/error.hpp"
#include "csv_util.hpp"

namespace ccl {
namespace {

int rank(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return 0;
  if (std::holds_alternative<std::string>(c)) return 2;
  return 1;
}

double as_double(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return static_cast<double>(std::get<std::int64_t>(c));
}

bool cell_less(const Cell& a, const Cell& b) {
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb) return ra < rb;
  if (ra == 1) return as_double(a) < as_double(b);
  if (ra == 2) return std::get<std::string>(a) < std::get<std::string>(b);
  return false;
}

std::ofstream open_text(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorCode::IoError, "cannot open " + path.string());
  return os;
}

std::string gp_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  require(!columns_.empty(), ErrorCode::InvalidParam, "result table needs columns");
  for (const std::string& c : columns_) {
    require(!c.empty() && c.find_first_of(",\"\n") == std::string::npos,
            ErrorCode::InvalidParam, "bad column name '" + c + "'");
  }
}

std::size_t ResultTable::column(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  require(it != columns_.end(), ErrorCode::InvalidParam,
          "no column named '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

void ResultTable::add_row(std::vector<Cell> row) {
  require(row.size() == columns_.size(), ErrorCode::ShapeMismatch,
          "row has " + std::to_string(row.size()) + " cells, table has " +
              std::to_string(columns_.size()) + " columns");
  rows_.push_back(std::move(row));
}

void ResultTable::sort_rows() {
  std::stable_sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), cell_less);
  });
}

const Cell& ResultTable::at(std::size_t row, std::string_view name) const {
  require(row < rows_.size(), ErrorCode::IndexOutOfRange, "row index out of range");
  return rows_[row][column(name)];
}

std::optional<double> ResultTable::number(std::size_t row, std::string_view name) const {
  const Cell& c = at(row, name);
  if (rank(c) != 1) return std::nullopt;
  return as_double(c);
}

Cell null_cell() { return std::monostate{}; }

Cell opt_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{std::monostate{}};
}

std::string format_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "";
  if (const auto* d = std::get_if<double>(&c)) return csv::format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::ofstream os = open_text(path);
  for (std::size_t i = 0; i < table.columns().size(); ++i) {
    os << (i ? "," : "") << table.columns()[i];
  }
  os << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string s = format_cell(row[i]);
      require(s.find_first_of(",\n") == std::string::npos, ErrorCode::InvalidParam,
              "cell value '" + s + "' cannot be written unquoted");
      os << (i ? "," : "") << s;
    }
    os << '\n';
  }
  require(static_cast<bool>(os), ErrorCode::IoError, "write failed: " + path.string());
}

void emit_plot_script(const ResultTable& table, const std::string& csv_name,
                      const PlotSpec& spec, const std::filesystem::path& path) {
  require(!spec.series.empty(), ErrorCode::InvalidParam, "plot needs at least one series");
  std::ofstream os = open_text(path);
  os << "# gnuplot " << path.filename().string() << "\n";
  os << "set datafile separator ','\n";
  os << "set datafile missing ''\n";
  os << "set key outside right\n";
  os << "set terminal pngcairo size 1200,600\n";
  os << "set output " << gp_quote(spec.output) << "\n";
  os << "set title " << gp_quote(spec.title) << "\n";
  os << "set xlabel " << gp_quote(spec.x_label) << "\n";
  os << "set ylabel " << gp_quote(spec.y_label) << "\n";
  if (spec.log_y) os << "set logscale y\n";
  os << "plot \\\n";
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    const PlotSeries& s = spec.series[i];
    const std::size_t x = table.column(s.x_column) + 1;
    const std::size_t y = table.column(s.y_column) + 1;
    std::string using_y = "(column(" + std::to_string(y) + "))";
    if (!s.filters.empty()) {
      std::string cond;
      for (const auto& [col, value] : s.filters) {
        const std::size_t f = table.column(col) + 1;
        cond += (cond.empty() ? "" : " && ") + std::string("strcol(") + std::to_string(f) +
                ") eq " + gp_quote(value);
      }
      using_y = "(" + cond + " ? column(" + std::to_string(y) + ") : NaN)";
    }
    os << "  " << gp_quote(csv_name) << " every ::1 using " << x << ":" << using_y
       << " with lines title " << gp_quote(s.title)
       << (i + 1 < spec.series.size() ? ", \\\n" : "\n");
  }
  require(static_cast<bool>(os), ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace ccl

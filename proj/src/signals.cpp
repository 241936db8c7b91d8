#include "ccl/signals.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "ccl/rng.hpp"
#include "csv_util.hpp"

namespace ccl {

TimeSeries::TimeSeries(Matrix data, std::vector<std::string> labels)
    : data_(std::move(data)), labels_(std::move(labels)) {
  require(!data_.empty(), ErrorCode::InvalidParam, "time series must have length >= 1");
  require(labels_.empty() || labels_.size() == data_.cols(), ErrorCode::InvalidParam,
          "channel label count must match channel count");
  require(all_finite(data_.values()), ErrorCode::NonFinite,
          "time series contains non-finite values");
}

TimeSeries TimeSeries::from_channel(std::span<const double> values) {
  return TimeSeries(Matrix::column(values));
}

TimeSeries TimeSeries::from_rows(const std::vector<Vector>& rows) {
  require(!rows.empty(), ErrorCode::InvalidParam, "time series must have length >= 1");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    require(rows[k].size() == m.cols(), ErrorCode::DimensionMismatch,
            "ragged rows in time series");
    std::copy(rows[k].begin(), rows[k].end(), m.row(k).begin());
  }
  return TimeSeries(std::move(m));
}

TimeSeries TimeSeries::slice(std::size_t begin, std::size_t end) const {
  require(begin < end && end <= length(), ErrorCode::InvalidParam,
          "slice bounds out of range");
  Matrix m(end - begin, channels());
  for (std::size_t k = begin; k < end; ++k) {
    const auto src = data_.row(k);
    std::copy(src.begin(), src.end(), m.row(k - begin).begin());
  }
  return TimeSeries(std::move(m), labels_);
}

TimeSeries gen_sine(double period, std::size_t length, double amplitude, double phase) {
  require(period > 0.0 && std::isfinite(period), ErrorCode::InvalidParam,
          "sine period must be positive");
  require(length >= 1, ErrorCode::InvalidParam, "length must be >= 1");
  Vector v(length);
  for (std::size_t n = 0; n < length; ++n)
    v[n] = amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(n) / period + phase);
  return TimeSeries::from_channel(v);
}

TimeSeries gen_two_sine(std::size_t length, double amplitude) {
  require(length >= 1, ErrorCode::InvalidParam, "length must be >= 1");
  Vector v(length);
  for (std::size_t n = 0; n < length; ++n) {
    // Reduce modulo the common period first so u(n + 21) == u(n) exactly.
    const double t = static_cast<double>(n % 21);
    v[n] = amplitude * (std::sin(2.0 * std::numbers::pi * t / 7.0) +
                        std::sin(2.0 * std::numbers::pi * t / 21.0));
  }
  return TimeSeries::from_channel(v);
}

TimeSeries gen_multivar_cycle(std::size_t channels, double period, std::size_t length,
                              std::uint64_t seed) {
  require(channels >= 1, ErrorCode::InvalidParam, "need at least one channel");
  require(period > 0.0 && std::isfinite(period), ErrorCode::InvalidParam,
          "cycle period must be positive");
  require(length >= 1, ErrorCode::InvalidParam, "length must be >= 1");
  Rng rng(seed);
  Vector amp(channels), phase(channels), offset(channels);
  for (std::size_t m = 0; m < channels; ++m) {
    amp[m] = rng.uniform(0.5, 1.5);
    phase[m] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    offset[m] = rng.uniform(-0.5, 0.5);
  }
  Matrix data(length, channels);
  for (std::size_t n = 0; n < length; ++n) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(n) / period;
    for (std::size_t m = 0; m < channels; ++m)
      data(n, m) = amp[m] * std::sin(theta + phase[m]) + offset[m];
  }
  return TimeSeries(std::move(data));
}

TimeSeries distort(const TimeSeries& u, const DistortionSpec& spec) {
  require(std::isfinite(spec.gain) && std::isfinite(spec.offset), ErrorCode::InvalidParam,
          "distortion gain and offset must be finite");
  Matrix data = u.data();
  for (std::size_t k = spec.onset; k < u.length(); ++k)
    for (double& v : data.row(k)) v = spec.gain * v + spec.offset;
  return TimeSeries(std::move(data), u.labels());
}

TimeSeries standardize(const TimeSeries& u) {
  Matrix data = u.data();
  const double len = static_cast<double>(u.length());
  for (std::size_t m = 0; m < u.channels(); ++m) {
    double mean = 0.0;
    for (std::size_t k = 0; k < u.length(); ++k) mean += data(k, m);
    mean /= len;
    double var = 0.0;
    for (std::size_t k = 0; k < u.length(); ++k) var += (data(k, m) - mean) * (data(k, m) - mean);
    var /= len;
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (std::size_t k = 0; k < u.length(); ++k) data(k, m) = (data(k, m) - mean) * scale;
  }
  return TimeSeries(std::move(data), u.labels());
}

TimeSeries load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());

  std::vector<std::string> labels;
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = csv::split(line);
    if (rows == 0 && labels.empty() && cols == 0) {
      bool numeric = true;
      for (const auto& c : cells) numeric = numeric && csv::parse_double(c).has_value();
      cols = cells.size();
      if (!numeric) {
        labels = cells;
        continue;
      }
    }
    require(cells.size() == cols, ErrorCode::ParseError,
            path.string() + ": row " + std::to_string(line_no) + " has " +
                std::to_string(cells.size()) + " columns, expected " + std::to_string(cols));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = csv::parse_double(cells[c]);
      require(v.has_value(), ErrorCode::ParseError,
              path.string() + ": row " + std::to_string(line_no) + ", column " +
                  std::to_string(c + 1) + ": not a number: '" + cells[c] + "'");
      values.push_back(*v);
    }
    ++rows;
  }
  require(rows > 0, ErrorCode::ParseError, path.string() + ": no data rows");
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.values().begin());
  return TimeSeries(std::move(m), std::move(labels));
}

void save_csv(const TimeSeries& u, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot write " + path.string());
  for (std::size_t m = 0; m < u.channels(); ++m) {
    if (m > 0) out << ',';
    out << (u.labels().empty() ? "ch" + std::to_string(m) : u.labels()[m]);
  }
  out << '\n';
  for (std::size_t k = 0; k < u.length(); ++k) {
    for (std::size_t m = 0; m < u.channels(); ++m) {
      if (m > 0) out << ',';
      out << csv::format_double(u(k, m));
    }
    out << '\n';
  }
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace ccl

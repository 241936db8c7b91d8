#pragma once

#include <string>
#include <vector>

#include "ccl/matrix.hpp"

namespace ccl {

// Uniformly sampled multi-channel signal, time-major: row k is the sample at
// time k, column m is channel m.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(Matrix data, std::vector<std::string> labels = {});

  static TimeSeries from_channel(std::span<const double> values);
  // Builds a series from a list of per-step sample vectors.
  static TimeSeries from_rows(const std::vector<Vector>& rows);

  std::size_t length() const noexcept { return data_.rows(); }
  std::size_t channels() const noexcept { return data_.cols(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> at(std::size_t k) const { return data_.row(k); }
  double operator()(std::size_t k, std::size_t m) const { return data_(k, m); }
  Vector channel(std::size_t m) const { return data_.col_copy(m); }

  const Matrix& data() const noexcept { return data_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  // Rows [begin, end).
  TimeSeries slice(std::size_t begin, std::size_t end) const;

  bool operator==(const TimeSeries&) const = default;

 private:
  Matrix data_;
  std::vector<std::string> labels_;
};

}  // namespace ccl

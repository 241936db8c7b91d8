#include "ccl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccl/linalg.hpp"

namespace ccl {

double nrmse(const TimeSeries& pred, const TimeSeries& target) {
  require(pred.length() == target.length() && pred.channels() == target.channels(),
          ErrorCode::ShapeMismatch, "nrmse: prediction and target shapes differ");
  const std::size_t len = target.length();
  double total = 0.0;
  for (std::size_t m = 0; m < target.channels(); ++m) {
    double mean = 0.0;
    for (std::size_t k = 0; k < len; ++k) mean += target(k, m);
    mean /= static_cast<double>(len);
    double var = 0.0, mse = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      const double d = target(k, m) - mean;
      var += d * d;
      const double e = pred(k, m) - target(k, m);
      mse += e * e;
    }
    require(var > 0.0, ErrorCode::ZeroVarianceTarget,
            "nrmse: target channel " + std::to_string(m) + " has zero variance");
    total += std::sqrt(mse / var);  // the 1/len factors cancel
  }
  return total / static_cast<double>(target.channels());
}

namespace {

double pearson(const TimeSeries& a, std::size_t a0, const TimeSeries& b, std::size_t b0,
               std::size_t len, std::size_t m) {
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    ma += a(a0 + k, m);
    mb += b(b0 + k, m);
  }
  ma /= static_cast<double>(len);
  mb /= static_cast<double>(len);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double da = a(a0 + k, m) - ma;
    const double db = b(b0 + k, m) - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

PhaseAlignment phase_align(const TimeSeries& pred, const TimeSeries& target,
                           std::size_t max_lag) {
  require(pred.channels() == target.channels(), ErrorCode::ShapeMismatch,
          "phase_align: channel counts differ");
  const std::size_t len = std::min(pred.length(), target.length());
  require(len >= max_lag + 2, ErrorCode::SeriesTooShort,
          "phase_align: series too short for max_lag " + std::to_string(max_lag));

  const auto lag_l = static_cast<long>(max_lag);
  auto overlap = [&](long lag) {
    // pred index = target index + lag
    const std::size_t p0 = lag > 0 ? static_cast<std::size_t>(lag) : 0;
    const std::size_t t0 = lag < 0 ? static_cast<std::size_t>(-lag) : 0;
    const std::size_t n = std::min(pred.length() - p0, target.length() - t0);
    return std::tuple{p0, t0, n};
  };
  auto score = [&](long lag) {
    const auto [p0, t0, n] = overlap(lag);
    double s = 0.0;
    for (std::size_t m = 0; m < pred.channels(); ++m) s += pearson(pred, p0, target, t0, n, m);
    return s / static_cast<double>(pred.channels());
  };

  long best_lag = 0;
  double best = score(0);
  for (long d = 1; d <= lag_l; ++d) {
    for (long lag : {d, -d}) {
      const double s = score(lag);
      if (s > best) {
        best = s;
        best_lag = lag;
      }
    }
  }
  const auto [p0, t0, n] = overlap(best_lag);
  return {static_cast<int>(best_lag), best, pred.slice(p0, p0 + n),
          target.slice(t0, t0 + n)};
}

std::size_t PeriodTrace::undefined_count() const {
  return static_cast<std::size_t>(std::count_if(
      windows.begin(), windows.end(), [](const PeriodWindow& w) { return !w.period; }));
}

PeriodTrace estimate_period(const TimeSeries& u, const PeriodOptions& opts) {
  require(u.channels() == 1, ErrorCode::NotSingleChannel,
          "estimate_period needs a single-channel series");
  require(opts.window >= 3, ErrorCode::InvalidParam, "period window must be >= 3 samples");
  PeriodTrace trace;
  trace.window = opts.window;
  trace.hop = opts.hop == 0 ? opts.window : opts.hop;

  for (std::size_t start = 0; start + opts.window <= u.length(); start += trace.hop) {
    double mean = 0.0, lo = u(start, 0), hi = u(start, 0);
    for (std::size_t k = start; k < start + opts.window; ++k) {
      mean += u(k, 0);
      lo = std::min(lo, u(k, 0));
      hi = std::max(hi, u(k, 0));
    }
    mean /= static_cast<double>(opts.window);

    PeriodWindow w;
    w.start = start;
    w.amplitude = 0.5 * (hi - lo);
    double first = 0.0, last = 0.0;
    std::size_t crossings = 0;
    for (std::size_t k = start; k + 1 < start + opts.window; ++k) {
      const double a = u(k, 0) - mean;
      const double b = u(k + 1, 0) - mean;
      if (a < 0.0 && b >= 0.0) {
        const double t = static_cast<double>(k) + a / (a - b);
        if (crossings == 0) first = t;
        last = t;
        ++crossings;
      }
    }
    if (crossings >= 2 && w.amplitude >= opts.min_amplitude)
      w.period = (last - first) / static_cast<double>(crossings - 1);
    trace.windows.push_back(w);
  }
  return trace;
}

PeriodTrace estimate_period(const TimeSeries& u, std::size_t window) {
  PeriodOptions opts;
  opts.window = window;
  return estimate_period(u, opts);
}

FailureVerdict detect_failure(const Matrix& states, double threshold) {
  require(states.cols() >= 2, ErrorCode::DegenerateInput,
          "detect_failure needs at least two time steps");
  const double v = pca(transpose(states)).variances.front();
  return {v < threshold, v, threshold};
}

double pc1_variance(const TimeSeries& u) { return pca(u.data()).variances.front(); }

}  // namespace ccl

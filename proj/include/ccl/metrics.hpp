#pragma once

#include <optional>
#include <vector>

#include "ccl/timeseries.hpp"

namespace ccl {

// Channel-averaged sqrt(mean((pred - target)^2) / var(target)).
double nrmse(const TimeSeries& pred, const TimeSeries& target);

struct PhaseAlignment {
  int lag = 0;                // pred(n + lag) is matched with target(n)
  double correlation = 0.0;   // channel-mean Pearson correlation at `lag`
  TimeSeries aligned_pred;    // overlap region of the shifted prediction
  TimeSeries aligned_target;  // matching overlap of the target
};

// Integer lag in [-max_lag, max_lag] maximizing the channel-mean correlation;
// ties go to the smallest |lag|.
PhaseAlignment phase_align(const TimeSeries& pred, const TimeSeries& target,
                           std::size_t max_lag);

struct PeriodWindow {
  std::size_t start = 0;                // first sample of the window
  std::optional<double> period;         // empty when undefined
  double amplitude = 0.0;               // half peak-to-peak
};

struct PeriodTrace {
  std::size_t window = 0;
  std::size_t hop = 0;
  std::vector<PeriodWindow> windows;

  std::size_t undefined_count() const;
};

struct PeriodOptions {
  std::size_t window = 200;
  std::size_t hop = 0;            // 0 means hop = window
  double min_amplitude = 1e-3;    // windows below this count as non-oscillating
};

// Mean spacing of upward zero crossings of the window-mean-removed signal,
// with linear sub-sample interpolation. Windows with fewer than two upward
// crossings, or with amplitude below `min_amplitude`, are undefined.
PeriodTrace estimate_period(const TimeSeries& u, const PeriodOptions& opts);
PeriodTrace estimate_period(const TimeSeries& u, std::size_t window);

struct FailureVerdict {
  bool failed = false;
  double pc1_variance = 0.0;
  double threshold = 0.0;
};

// Leading PCA variance of states (n x L, one column per time step);
// failed <=> pc1_variance < threshold.
FailureVerdict detect_failure(const Matrix& states, double threshold);

// Leading PCA variance of a series (rows are samples).
double pc1_variance(const TimeSeries& u);

}  // namespace ccl

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ccl/conceptor.hpp"
#include "ccl/config.hpp"
#include "ccl/metrics.hpp"
#include "ccl/reservoir.hpp"
#include "ccl/results.hpp"
#include "ccl/rfc.hpp"

namespace ccl {

// ---- interpolation -------------------------------------------------------

struct InterpolationSetup {
  ReservoirParams params;
  Readout readout;      // one readout for both sines
  Conceptor c0;         // period t0
  Conceptor c1;         // period t1
  Vector x0;            // last harvested t0 state; the autonomous run starts here
};

// Harvests sin(2 pi n / t0) and sin(2 pi n / t1), fits a joint ridge readout
// on the stacked states and computes both conceptors.
InterpolationSetup train_interpolation(const ExperimentConfig& cfg, double t1);

// Autonomous run under the target T(lambda) = (1 - lambda) C0 + lambda C1.
// Static applies T directly. Ccl keeps an autoconceptor estimate C and applies
// (1 - beta) C' + beta T where C' is C updated with the current state; this
// equals ccl_step followed by autonomous_step, without forming T or the
// adapted conceptor. `setup` must outlive the loop.
class InterpolationLoop {
 public:
  InterpolationLoop(const InterpolationSetup& setup, RunMode mode, double eta, double beta);

  // One step at interpolation parameter lambda; returns y(k) = W_out x(k).
  double step(double lambda);

  const Vector& state() const noexcept { return x_; }
  // Autoconceptor estimate (ccl mode); C0 in static mode.
  const Matrix& estimate() const noexcept { return c_; }

 private:
  const InterpolationSetup& setup_;
  RunMode mode_;
  double eta_;
  double beta_;
  Vector x_;
  Matrix c_;
  Vector pre_, a_, b_, cx_, e_;
};

struct InterpolationTrace {
  double t1 = 0.0;
  RunMode mode = RunMode::Static;
  std::vector<double> y;
  PeriodTrace period;
  std::uint64_t steps_to_end = 0;  // first step with lambda = 1
};

InterpolationTrace run_interpolation_mode(const ExperimentConfig& cfg,
                                          const InterpolationSetup& setup, double t1,
                                          RunMode mode);

struct InterpolationSummary {
  double period_start = 0.0;      // first window (NaN if undefined)
  double period_end = 0.0;        // last window of the tail (NaN if undefined)
  double amplitude_start = 0.0;
  double amplitude_end = 0.0;
  double amplitude_min = 0.0;     // over windows inside the scan
  std::size_t undefined = 0;      // undefined windows inside the scan
  // lambda range of undefined windows inside the scan, if any
  std::optional<double> collapse_from;
  std::optional<double> collapse_to;
};

// "Inside the scan" means windows that start before lambda reaches 1.
InterpolationSummary summarize(const InterpolationTrace& trace, double lambda_rate);

struct InterpolationResult {
  ResultTable output;   // t1, mode, k, lambda, y
  ResultTable period;   // t1, mode, window_start, lambda, period, amplitude
  ResultTable summary;  // one row per (t1, mode)
  std::vector<InterpolationTrace> traces;
};

InterpolationResult run_interpolation(const ExperimentConfig& cfg);

// ---- degradation ---------------------------------------------------------

struct DegradationSetup {
  ReservoirParams params;
  Readout readout;
  Conceptor target;
  Vector x0;
  TimeSeries baseline;        // undegraded static output, transient included
  double baseline_pc1 = 0.0;  // pc1 variance of the undegraded states over the
                              // evaluation window
};

// Trains on the configured series (CSV or synthetic cycle) and records the
// undegraded baseline. Both sources supply washout + train_length + 1 rows; a
// CSV is truncated to that and standardized first if requested.
DegradationSetup train_degradation(const ExperimentConfig& cfg);
TimeSeries degradation_series(const ExperimentConfig& cfg);

struct DegradedRun {
  TimeSeries output;       // full run, transient included
  double pc1_variance = 0.0;
  bool failed = false;
};

// Autonomous run with `mask` clamped after every update. Static keeps
// C_target; ccl runs merged_ccl_update from C_target.
DegradedRun run_degraded(const ExperimentConfig& cfg, const DegradationSetup& setup,
                         const DegradationMask& mask, RunMode mode);

std::uint64_t mask_seed(std::uint64_t seed, std::size_t k_removed, std::size_t trial);

struct DegradationResult {
  // k_removed, trial, mode, failed, pc1_variance, variance_ratio, nrmse, lag, seed
  ResultTable trials;
  // k_removed, mode, failure_rate, mean_nrmse, joint_trials
  ResultTable summary;
  // step, baseline, static, ccl (channel 0, first trial of the first K)
  ResultTable example;
};

DegradationResult run_degradation(const ExperimentConfig& cfg);

// ---- distortion ----------------------------------------------------------

RfcConfig rfc_config(const ExperimentConfig& cfg);
RfcTraining train_distortion(const ExperimentConfig& cfg);

struct DistortionResult {
  ResultTable nrmse;   // layer, nrmse_ccl, nrmse_static
  ResultTable output;  // step, mode, target, input, layer1 ... layerL
  std::vector<double> nrmse_ccl;
  std::vector<double> nrmse_static;
};

DistortionResult run_distortion(const ExperimentConfig& cfg);

// ---- output --------------------------------------------------------------

// Writes the CSVs and gnuplot scripts of one experiment into cfg.out_dir and
// returns the file names written, in order.
std::vector<std::string> write_outputs(const ExperimentConfig& cfg,
                                       const InterpolationResult& r);
std::vector<std::string> write_outputs(const ExperimentConfig& cfg,
                                       const DegradationResult& r);
std::vector<std::string> write_outputs(const ExperimentConfig& cfg,
                                       const DistortionResult& r);

// Trains the experiment's network(s) and writes the trained artifacts:
// reservoir.bin and readout files (binary, see save_reservoir), conceptor
// matrices or the RFC c_target vector, and conceptor_summary.csv with the
// spectrum of every conceptor written.
std::vector<std::string> write_conceptor_dump(const ExperimentConfig& cfg);

}  // namespace ccl

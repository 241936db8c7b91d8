#include <algorithm>
#include <cmath>
#include <limits>

#include "ccl/experiments.hpp"
#include "ccl/kernels.hpp"
#include "ccl/signals.hpp"

namespace ccl {
namespace {

Harvest harvest_sine(const ExperimentConfig& cfg, const ReservoirParams& p, double period) {
  return harvest(p, gen_sine(period, cfg.washout + cfg.train_length + 1), cfg.washout);
}

std::string mode_name(RunMode m) { return std::string(to_string(m)); }

std::vector<RunMode> modes_of(RunMode m) {
  if (m == RunMode::Both) return {RunMode::Static, RunMode::Ccl};
  return {m};
}

}  // namespace

InterpolationSetup train_interpolation(const ExperimentConfig& cfg, double t1) {
  ReservoirParams p = init_reservoir(
      {cfg.n, cfg.alpha, cfg.rho, cfg.rho_in, cfg.rho_b, 1, cfg.seed});
  const Harvest h0 = harvest_sine(cfg, p, cfg.t0);
  const Harvest h1 = harvest_sine(cfg, p, t1);

  const std::size_t l0 = h0.states.cols();
  const std::size_t l1 = h1.states.cols();
  Matrix states(cfg.n, l0 + l1);
  Matrix targets(l0 + l1, 1);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    for (std::size_t k = 0; k < l0; ++k) states(i, k) = h0.states(i, k);
    for (std::size_t k = 0; k < l1; ++k) states(i, l0 + k) = h1.states(i, k);
  }
  for (std::size_t k = 0; k < l0; ++k) targets(k, 0) = h0.targets(k, 0);
  for (std::size_t k = 0; k < l1; ++k) targets(l0 + k, 0) = h1.targets(k, 0);

  InterpolationSetup s{std::move(p), train_readout(states, TimeSeries(std::move(targets)),
                                                   cfg.ridge_reg),
                       conceptor_from_states(h0.states, cfg.aperture),
                       conceptor_from_states(h1.states, cfg.aperture),
                       h0.states.col_copy(l0 - 1)};
  return s;
}

InterpolationLoop::InterpolationLoop(const InterpolationSetup& setup, RunMode mode,
                                     double eta, double beta)
    : setup_(setup),
      mode_(mode),
      eta_(eta),
      beta_(beta),
      x_(setup.x0),
      c_(setup.c0.matrix()),
      pre_(setup.params.n),
      a_(setup.params.n),
      b_(setup.params.n),
      cx_(setup.params.n),
      e_(setup.params.n) {
  require(mode == RunMode::Static || mode == RunMode::Ccl, ErrorCode::InvalidParam,
          "interpolation loop runs one mode at a time");
  require(eta > 0.0 && beta >= 0.0 && beta <= 1.0, ErrorCode::InvalidParam,
          "interpolation loop needs eta > 0 and beta in [0, 1]");
}

double InterpolationLoop::step(double lambda) {
  require(lambda >= 0.0 && lambda <= 1.0, ErrorCode::LambdaOutOfRange,
          "interpolation parameter must lie in [0, 1]");
  const std::size_t n = setup_.params.n;
  const double y = setup_.readout.apply(x_)[0];
  pre_ = leaky_update(setup_.params, x_, std::span<const double>(&y, 1));

  // b = T(lambda) pre
  kernels::gemv(setup_.c0.matrix().values(), n, n, pre_, b_);
  kernels::gemv(setup_.c1.matrix().values(), n, n, pre_, a_);
  kernels::axpby(lambda, a_, 1.0 - lambda, b_);

  if (mode_ == RunMode::Static) {
    x_ = b_;
  } else {
    kernels::gemv(c_.values(), n, n, x_, cx_);
    for (std::size_t i = 0; i < n; ++i) e_[i] = x_[i] - cx_[i];
    const double gamma = setup_.c0.aperture();
    kernels::sym_rank2_update_apply(c_.values(), n, 1.0 - eta_ / (gamma * gamma), 0.5 * eta_,
                                    e_, x_, {}, 0.0, pre_, a_);
    for (std::size_t i = 0; i < n; ++i) x_[i] = (1.0 - beta_) * a_[i] + beta_ * b_[i];
  }
  require(all_finite(x_), ErrorCode::NonFinite,
          "interpolation run became non-finite (eta too large?)");
  return y;
}

InterpolationTrace run_interpolation_mode(const ExperimentConfig& cfg,
                                          const InterpolationSetup& setup, double t1,
                                          RunMode mode) {
  const InterpolationSchedule sched{cfg.lambda_rate};
  InterpolationTrace trace;
  trace.t1 = t1;
  trace.mode = mode;
  trace.steps_to_end = sched.steps_to_end();
  const std::uint64_t total = trace.steps_to_end + cfg.tail_steps;
  trace.y.reserve(total);

  InterpolationLoop loop(setup, mode, cfg.eta, cfg.beta);
  for (std::uint64_t k = 0; k < total; ++k) trace.y.push_back(loop.step(sched.lambda_at(k)));

  PeriodOptions po;
  po.window = cfg.period_window;
  po.min_amplitude = cfg.min_amplitude;
  trace.period = estimate_period(TimeSeries::from_channel(trace.y), po);
  return trace;
}

InterpolationSummary summarize(const InterpolationTrace& trace, double lambda_rate) {
  const InterpolationSchedule sched{lambda_rate};
  const auto& w = trace.period.windows;
  require(!w.empty(), ErrorCode::SeriesTooShort, "no period windows to summarize");
  const double nan = std::numeric_limits<double>::quiet_NaN();

  InterpolationSummary s;
  s.period_start = w.front().period.value_or(nan);
  s.period_end = w.back().period.value_or(nan);
  s.amplitude_start = w.front().amplitude;
  s.amplitude_end = w.back().amplitude;
  s.amplitude_min = std::numeric_limits<double>::infinity();
  for (const PeriodWindow& win : w) {
    if (win.start >= trace.steps_to_end) break;
    s.amplitude_min = std::min(s.amplitude_min, win.amplitude);
    if (win.period) continue;
    ++s.undefined;
    const double lam = sched.lambda_at(win.start);
    if (!s.collapse_from) s.collapse_from = lam;
    s.collapse_to = lam;
  }
  return s;
}

InterpolationResult run_interpolation(const ExperimentConfig& cfg) {
  validate(cfg);
  InterpolationResult r{ResultTable({"t1", "mode", "k", "lambda", "y"}),
                        ResultTable({"t1", "mode", "window_start", "lambda", "period",
                                     "amplitude"}),
                        ResultTable({"t1", "mode", "period_start", "period_end",
                                     "amplitude_start", "amplitude_end", "amplitude_min",
                                     "undefined_windows", "collapse_from", "collapse_to",
                                     "seed"}),
                        {}};
  const InterpolationSchedule sched{cfg.lambda_rate};
  const auto finite_or_null = [](double v) {
    return std::isfinite(v) ? Cell{v} : null_cell();
  };

  for (double t1 : cfg.t1) {
    const InterpolationSetup setup = train_interpolation(cfg, t1);
    for (RunMode mode : modes_of(cfg.mode)) {
      InterpolationTrace trace = run_interpolation_mode(cfg, setup, t1, mode);
      const std::string m = mode_name(mode);
      for (std::size_t k = 0; k < trace.y.size(); k += cfg.output_stride) {
        r.output.add_row({t1, m, static_cast<std::int64_t>(k), sched.lambda_at(k), trace.y[k]});
      }
      for (const PeriodWindow& w : trace.period.windows) {
        r.period.add_row({t1, m, static_cast<std::int64_t>(w.start), sched.lambda_at(w.start),
                          opt_cell(w.period), w.amplitude});
      }
      const InterpolationSummary s = summarize(trace, cfg.lambda_rate);
      r.summary.add_row({t1, m, finite_or_null(s.period_start), finite_or_null(s.period_end),
                         s.amplitude_start, s.amplitude_end, s.amplitude_min,
                         static_cast<std::int64_t>(s.undefined), opt_cell(s.collapse_from),
                         opt_cell(s.collapse_to), std::to_string(cfg.seed)});
      r.traces.push_back(std::move(trace));
    }
  }
  r.output.sort_rows();
  r.period.sort_rows();
  r.summary.sort_rows();
  return r;
}

}  // namespace ccl

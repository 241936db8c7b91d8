#include <cmath>

#include "ccl/experiments.hpp"
#include "ccl/rng.hpp"
#include "ccl/signals.hpp"

namespace ccl {
namespace {

constexpr std::uint64_t kDataStream = 0xda7a;

std::vector<RunMode> modes_of(RunMode m) {
  if (m == RunMode::Both) return {RunMode::Static, RunMode::Ccl};
  return {m};
}

struct RawRun {
  TimeSeries output;
  Matrix eval_states;
};

RawRun autonomous_run(const ExperimentConfig& cfg, const ReservoirParams& p,
                      const Readout& r, const Vector& x0, const Conceptor& target,
                      const DegradationMask* mask, RunMode mode) {
  const std::size_t steps = cfg.transient + cfg.eval_window;
  Matrix y(steps, r.outputs());
  Matrix states(p.n, cfg.eval_window);
  CclParams ccl{cfg.eta, cfg.beta, cfg.aperture, target};
  Conceptor c = target;
  ReservoirState s{x0, 0};
  for (std::size_t k = 0; k < steps; ++k) {
    auto [next, out] = autonomous_step(p, s, r, &c);
    if (mask != nullptr) clamp_in_place(next.x, *mask);
    s = std::move(next);
    if (mode == RunMode::Ccl) merged_ccl_update(c, s.x, ccl);
    std::copy(out.begin(), out.end(), y.row(k).begin());
    if (k >= cfg.transient) {
      for (std::size_t i = 0; i < p.n; ++i) states(i, k - cfg.transient) = s.x[i];
    }
  }
  return {TimeSeries(std::move(y)), std::move(states)};
}

}  // namespace

TimeSeries degradation_series(const ExperimentConfig& cfg) {
  const std::size_t length = cfg.washout + cfg.train_length + 1;
  if (!cfg.data.empty()) {
    TimeSeries u = load_csv(cfg.data);
    require(u.length() >= length, ErrorCode::SeriesTooShort,
            cfg.data.string() + " has " + std::to_string(u.length()) + " rows, washout + " +
                "train_length + 1 = " + std::to_string(length) + " needed");
    u = u.slice(0, length);
    return cfg.standardize_data ? standardize(u) : u;
  }
  return gen_multivar_cycle(cfg.channels, cfg.cycle_period, length,
                            derive_seed(cfg.seed, kDataStream));
}

DegradationSetup train_degradation(const ExperimentConfig& cfg) {
  const TimeSeries u = degradation_series(cfg);
  ReservoirParams p = init_reservoir(
      {cfg.n, cfg.alpha, cfg.rho, cfg.rho_in, cfg.rho_b, u.channels(), cfg.seed});
  const Harvest h = harvest(p, u, cfg.washout);
  Readout r = train_readout(h.states, h.targets, cfg.ridge_reg);
  Conceptor target = conceptor_from_states(h.states, cfg.aperture);
  Vector x0 = h.states.col_copy(h.states.cols() - 1);

  RawRun base = autonomous_run(cfg, p, r, x0, target, nullptr, RunMode::Static);
  const double pc1 = detect_failure(base.eval_states, cfg.threshold).pc1_variance;
  require(pc1 > 0.0, ErrorCode::DegenerateInput,
          "undegraded baseline does not oscillate; nothing to compare against");
  return {std::move(p), std::move(r), std::move(target), std::move(x0),
          std::move(base.output), pc1};
}

DegradedRun run_degraded(const ExperimentConfig& cfg, const DegradationSetup& setup,
                         const DegradationMask& mask, RunMode mode) {
  require(mode == RunMode::Static || mode == RunMode::Ccl, ErrorCode::InvalidParam,
          "degraded run needs a single mode");
  RawRun raw = autonomous_run(cfg, setup.params, setup.readout, setup.x0, setup.target,
                              &mask, mode);
  DegradedRun out;
  out.pc1_variance = detect_failure(raw.eval_states, cfg.threshold).pc1_variance;
  out.failed = cfg.relative_failure
                   ? out.pc1_variance / setup.baseline_pc1 < cfg.failure_ratio
                   : out.pc1_variance < cfg.threshold;
  out.output = std::move(raw.output);
  return out;
}

std::uint64_t mask_seed(std::uint64_t seed, std::size_t k_removed, std::size_t trial) {
  return derive_seed(seed, (static_cast<std::uint64_t>(k_removed) + 1) << 20 | trial);
}

DegradationResult run_degradation(const ExperimentConfig& cfg) {
  validate(cfg);
  DegradationResult r{
      ResultTable({"k_removed", "trial", "mode", "failed", "pc1_variance", "variance_ratio",
                   "nrmse", "lag", "seed"}),
      ResultTable({"k_removed", "mode", "failure_rate", "mean_nrmse", "joint_trials"}),
      ResultTable({"step", "baseline", "static", "ccl"})};

  const DegradationSetup setup = train_degradation(cfg);
  const std::size_t end = cfg.transient + cfg.eval_window;
  const std::size_t nrmse_end = cfg.transient + cfg.nrmse_window;
  const TimeSeries baseline_eval = setup.baseline.slice(cfg.transient, nrmse_end);
  const std::vector<RunMode> modes = modes_of(cfg.mode);

  for (std::size_t ki = 0; ki < cfg.k_list.size(); ++ki) {
    const std::size_t k_removed = cfg.k_list[ki];
    std::vector<std::size_t> failures(modes.size(), 0);
    std::vector<double> nrmse_sum(modes.size(), 0.0);
    std::size_t joint = 0;

    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const std::uint64_t seed = mask_seed(cfg.seed, k_removed, t);
      const DegradationMask mask = DegradationMask::random(cfg.n, k_removed, seed);
      std::vector<DegradedRun> runs;
      bool any_failed = false;
      for (RunMode m : modes) {
        runs.push_back(run_degraded(cfg, setup, mask, m));
        any_failed = any_failed || runs.back().failed;
      }

      if (ki == 0 && t == 0) {
        for (std::size_t k = 0; k < end; ++k) {
          std::vector<Cell> row{static_cast<std::int64_t>(k), setup.baseline(k, 0)};
          for (RunMode want : {RunMode::Static, RunMode::Ccl}) {
            Cell v = null_cell();
            for (std::size_t i = 0; i < modes.size(); ++i) {
              if (modes[i] == want) v = runs[i].output(k, 0);
            }
            row.push_back(v);
          }
          r.example.add_row(std::move(row));
        }
      }

      if (!any_failed) ++joint;
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const DegradedRun& run = runs[i];
        Cell nrmse_cell = null_cell();
        Cell lag_cell = null_cell();
        if (!any_failed) {
          const PhaseAlignment al =
              phase_align(run.output.slice(cfg.transient, nrmse_end), baseline_eval,
                          cfg.max_lag);
          const double e = nrmse(al.aligned_pred, al.aligned_target);
          nrmse_sum[i] += e;
          nrmse_cell = e;
          lag_cell = static_cast<std::int64_t>(al.lag);
        }
        if (run.failed) ++failures[i];
        r.trials.add_row({static_cast<std::int64_t>(k_removed), static_cast<std::int64_t>(t),
                          std::string(to_string(modes[i])),
                          static_cast<std::int64_t>(run.failed ? 1 : 0), run.pc1_variance,
                          run.pc1_variance / setup.baseline_pc1, nrmse_cell, lag_cell,
                          std::to_string(seed)});
      }
    }

    for (std::size_t i = 0; i < modes.size(); ++i) {
      r.summary.add_row({static_cast<std::int64_t>(k_removed), std::string(to_string(modes[i])),
                         static_cast<double>(failures[i]) / static_cast<double>(cfg.trials),
                         joint > 0 ? Cell{nrmse_sum[i] / static_cast<double>(joint)}
                                   : null_cell(),
                         static_cast<std::int64_t>(joint)});
    }
  }
  r.trials.sort_rows();
  r.summary.sort_rows();
  return r;
}

}  // namespace ccl

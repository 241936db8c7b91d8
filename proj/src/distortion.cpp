#include <cmath>

#include "ccl/experiments.hpp"
#include "ccl/signals.hpp"

namespace ccl {

RfcConfig rfc_config(const ExperimentConfig& cfg) {
  RfcConfig r;
  r.n = cfg.n;
  r.n_rfc = cfg.n_rfc;
  r.rho = cfg.rho;
  r.rho_in = cfg.rho_in;
  r.rho_b = cfg.rho_b;
  r.inputs = 1;
  r.seed = cfg.seed;
  r.expand_scale = cfg.expand_scale > 0.0 ? cfg.expand_scale
                                          : 1.0 / std::sqrt(static_cast<double>(cfg.n));
  return r;
}

RfcTraining train_distortion(const ExperimentConfig& cfg) {
  const TimeSeries clean = gen_two_sine(cfg.washout + cfg.train_length + 1);
  return train_rfc(rfc_init(rfc_config(cfg)), clean, cfg.washout, cfg.ridge_reg,
                   cfg.aperture);
}

DistortionResult run_distortion(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<std::string> columns{"step", "mode", "target", "input"};
  for (std::size_t l = 1; l <= cfg.layers; ++l) columns.push_back("layer" + std::to_string(l));
  DistortionResult r{ResultTable({"layer", "nrmse_ccl", "nrmse_static"}),
                     ResultTable(columns), {}, {}};

  const RfcTraining trained = train_distortion(cfg);
  const TimeSeries clean = gen_two_sine(cfg.run_steps);
  const TimeSeries input = distort(clean, {cfg.gain, cfg.offset, cfg.onset});
  const std::size_t first = cfg.run_steps - cfg.eval_steps;
  const TimeSeries target = clean.slice(first, cfg.run_steps);
  const VectorCclParams params{cfg.eta, cfg.aperture, cfg.beta};

  for (RunMode mode : {RunMode::Static, RunMode::Ccl}) {
    if (cfg.mode != RunMode::Both && cfg.mode != mode) continue;
    Hierarchy h(trained, cfg.layers, params, mode == RunMode::Ccl);
    std::vector<Matrix> outputs(cfg.layers, Matrix(cfg.eval_steps, 1));
    for (std::size_t k = 0; k < cfg.run_steps; ++k) {
      const std::vector<Vector> ys = h.step(input.at(k));
      if (k < first) continue;
      std::vector<Cell> row{static_cast<std::int64_t>(k), std::string(to_string(mode)),
                            clean(k, 0), input(k, 0)};
      for (std::size_t l = 0; l < cfg.layers; ++l) {
        outputs[l](k - first, 0) = ys[l][0];
        row.push_back(ys[l][0]);
      }
      r.output.add_row(std::move(row));
    }
    std::vector<double>& errs = mode == RunMode::Ccl ? r.nrmse_ccl : r.nrmse_static;
    for (std::size_t l = 0; l < cfg.layers; ++l) {
      const PhaseAlignment al = phase_align(TimeSeries(outputs[l]), target, cfg.max_lag);
      errs.push_back(nrmse(al.aligned_pred, al.aligned_target));
    }
  }

  for (std::size_t l = 0; l < cfg.layers; ++l) {
    r.nrmse.add_row({static_cast<std::int64_t>(l + 1),
                     r.nrmse_ccl.empty() ? null_cell() : Cell{r.nrmse_ccl[l]},
                     r.nrmse_static.empty() ? null_cell() : Cell{r.nrmse_static[l]}});
  }
  r.output.sort_rows();
  return r;
}

}  // namespace ccl

#include <algorithm>
#include <fstream>
#include <functional>

#include "ccl/error.hpp"
#include "ccl/experiments.hpp"
#include "ccl/linalg.hpp"

namespace ccl {
namespace {

class Writer {
 public:
  explicit Writer(const ExperimentConfig& cfg) : dir_(cfg.out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    require(!ec, ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
    std::ofstream os(dir_ / "config_used.txt", std::ios::binary);
    os << render_config(cfg);
    require(static_cast<bool>(os), ErrorCode::IoError,
            "write failed: " + (dir_ / "config_used.txt").string());
    written_.push_back("config_used.txt");
  }

  void csv(const ResultTable& t, const std::string& name) {
    emit_csv(t, dir_ / name);
    written_.push_back(name);
  }

  void plot(const ResultTable& t, const std::string& csv_name, const PlotSpec& spec,
            const std::string& name) {
    emit_plot_script(t, csv_name, spec, dir_ / name);
    written_.push_back(name);
  }

  std::vector<std::string> done() { return std::move(written_); }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> written_;
};

std::vector<std::string> modes_of(RunMode m) {
  if (m == RunMode::Both) return {"static", "ccl"};
  return {std::string(to_string(m))};
}

}  // namespace

std::vector<std::string> write_outputs(const ExperimentConfig& cfg,
                                       const InterpolationResult& r) {
  Writer w(cfg);
  const std::string p = cfg.prefix;
  w.csv(r.output, p + "_output.csv");
  w.csv(r.period, p + "_period.csv");
  w.csv(r.summary, p + "_summary.csv");

  PlotSpec out{"autonomous output", "step", "y", p + "_output.png", {}, false};
  PlotSpec per{"estimated period", "lambda", "period", p + "_period.png", {}, false};
  for (double t1 : cfg.t1) {
    const std::string t = format_cell(t1);
    for (const std::string& m : modes_of(cfg.mode)) {
      const std::vector<std::pair<std::string, std::string>> f{{"t1", t}, {"mode", m}};
      out.series.push_back({"k", "y", "T1=" + t + " " + m, f});
      per.series.push_back({"lambda", "period", "T1=" + t + " " + m, f});
    }
  }
  w.plot(r.output, p + "_output.csv", out, p + "_output.gp");
  w.plot(r.period, p + "_period.csv", per, p + "_period.gp");
  return w.done();
}

std::vector<std::string> write_outputs(const ExperimentConfig& cfg,
                                       const DegradationResult& r) {
  Writer w(cfg);
  w.csv(r.trials, "degrade_trials.csv");
  w.csv(r.summary, "degrade_summary.csv");
  w.csv(r.example, "degrade_example.csv");

  PlotSpec rate{"failure rate", "neurons removed", "failure rate", "degrade_failure.png", {},
                false};
  PlotSpec err{"NRMSE on jointly stable trials", "neurons removed", "NRMSE",
               "degrade_nrmse.png", {}, false};
  for (const std::string& m : modes_of(cfg.mode)) {
    rate.series.push_back({"k_removed", "failure_rate", m, {{"mode", m}}});
    err.series.push_back({"k_removed", "mean_nrmse", m, {{"mode", m}}});
  }
  w.plot(r.summary, "degrade_summary.csv", rate, "degrade_failure.gp");
  w.plot(r.summary, "degrade_summary.csv", err, "degrade_nrmse.gp");

  PlotSpec ex{"channel 0 under degradation", "step", "y", "degrade_example.png", {}, false};
  ex.series.push_back({"step", "baseline", "undegraded", {}});
  for (const std::string& m : modes_of(cfg.mode)) ex.series.push_back({"step", m, m, {}});
  w.plot(r.example, "degrade_example.csv", ex, "degrade_example.gp");
  return w.done();
}

std::vector<std::string> write_outputs(const ExperimentConfig& cfg,
                                       const DistortionResult& r) {
  Writer w(cfg);
  w.csv(r.nrmse, "distort_nrmse.csv");
  w.csv(r.output, "distort_output.csv");

  PlotSpec err{"NRMSE per layer", "layer", "NRMSE", "distort_nrmse.png", {}, false};
  for (const std::string& m : modes_of(cfg.mode)) {
    err.series.push_back({"layer", "nrmse_" + m, m, {}});
  }
  w.plot(r.nrmse, "distort_nrmse.csv", err, "distort_nrmse.gp");

  for (const std::string& m : modes_of(cfg.mode)) {
    PlotSpec out{"layer outputs (" + m + ")", "step", "y", "distort_output_" + m + ".png", {},
                 false};
    out.series.push_back({"step", "target", "clean", {{"mode", m}}});
    out.series.push_back({"step", "input", "distorted", {{"mode", m}}});
    for (std::size_t l = 1; l <= cfg.layers; ++l) {
      const std::string c = "layer" + std::to_string(l);
      out.series.push_back({"step", c, c, {{"mode", m}}});
    }
    w.plot(r.output, "distort_output.csv", out, "distort_output_" + m + ".gp");
  }
  return w.done();
}

namespace {

void add_spectrum(ResultTable& t, const std::string& name, const Vector& eig, double aperture) {
  double sum = 0.0;
  for (double v : eig) sum += v;
  const double n = static_cast<double>(eig.size());
  t.add_row({name, static_cast<std::int64_t>(eig.size()), aperture, sum / n,
             eig.empty() ? 0.0 : eig[eig.size() - 1], eig.empty() ? 0.0 : eig[0]});
}

}  // namespace

std::vector<std::string> write_conceptor_dump(const ExperimentConfig& cfg) {
  validate(cfg);
  Writer w(cfg);
  const std::filesystem::path dir = cfg.out_dir;
  ResultTable summary({"name", "dim", "aperture", "quota", "eig_min", "eig_max"});
  std::vector<std::string> files;
  const auto conceptor = [&](const Conceptor& c, const std::string& name) {
    save_conceptor(c, dir / (name + ".bin"));
    files.push_back(name + ".bin");
    add_spectrum(summary, name, symmetric_eigen(c.matrix()).values, c.aperture());
  };

  switch (cfg.experiment) {
    case Experiment::Interpolate:
      for (std::size_t i = 0; i < cfg.t1.size(); ++i) {
        const InterpolationSetup s = train_interpolation(cfg, cfg.t1[i]);
        const std::string t = format_cell(cfg.t1[i]);
        if (i == 0) {
          save_reservoir(s.params, dir / "reservoir.bin");
          files.push_back("reservoir.bin");
          conceptor(s.c0, "conceptor_t0");
        }
        save_readout(s.readout, dir / ("readout_t1_" + t + ".bin"));
        files.push_back("readout_t1_" + t + ".bin");
        conceptor(s.c1, "conceptor_t1_" + t);
      }
      break;
    case Experiment::Degrade: {
      const DegradationSetup s = train_degradation(cfg);
      save_reservoir(s.params, dir / "reservoir.bin");
      save_readout(s.readout, dir / "readout.bin");
      files.insert(files.end(), {"reservoir.bin", "readout.bin"});
      conceptor(s.target, "conceptor_target");
      break;
    }
    case Experiment::Distort: {
      const RfcTraining t = train_distortion(cfg);
      ResultTable c({"index", "c_target"});
      for (std::size_t i = 0; i < t.c_target.size(); ++i) {
        c.add_row({static_cast<std::int64_t>(i), t.c_target[i]});
      }
      w.csv(c, "c_target.csv");
      Vector sorted = t.c_target;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      add_spectrum(summary, "c_target", sorted, cfg.aperture);
      break;
    }
  }
  w.csv(summary, "conceptor_summary.csv");
  std::vector<std::string> out = w.done();
  out.insert(out.begin() + 1, files.begin(), files.end());
  return out;
}

}  // namespace ccl

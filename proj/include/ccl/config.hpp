#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ccl {

enum class Experiment { Interpolate, Degrade, Distort };
enum class RunMode { Static, Ccl, Both };

std::string_view to_string(Experiment e) noexcept;
std::string_view to_string(RunMode m) noexcept;
// Throws ConfigError for unknown names.
Experiment parse_experiment(std::string_view name);
RunMode parse_mode(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::Interpolate;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  RunMode mode = RunMode::Both;

  // Reservoir, readout, conceptor.
  std::size_t n = 256;
  double alpha = 0.75;
  double rho = 1.6;
  double rho_in = 1.0;
  double rho_b = 1.0;
  double ridge_reg = 1e-4;
  double aperture = 25.0;
  double eta = 0.2;
  double beta = 2.5e-5;
  std::size_t washout = 100;
  std::size_t train_length = 1500;  // harvested steps after washout

  // interpolate
  double t0 = 20.0;
  std::vector<double> t1{25.0, 30.0, 35.0};
  double lambda_rate = 1e-5;
  std::size_t tail_steps = 20000;
  std::size_t period_window = 400;
  double min_amplitude = 0.05;
  std::size_t output_stride = 10;
  std::string prefix = "interp";

  // degrade
  std::vector<std::size_t> k_list{100, 200, 300, 400, 500, 600, 700};
  std::size_t trials = 10;
  double threshold = 1.0;         // absolute pc1 variance threshold
  double failure_ratio = 0.05;    // pc1 variance relative to the baseline
  bool relative_failure = true;
  std::filesystem::path data;     // CSV input; empty selects the synthetic cycle
  bool standardize_data = true;
  std::size_t channels = 10;
  double cycle_period = 40.0;
  std::size_t transient = 200;
  std::size_t eval_window = 600;  // failure detection
  // NRMSE against the baseline uses the first nrmse_window steps after the
  // transient; one lag cannot absorb the period drift of a longer window
  std::size_t nrmse_window = 120;
  std::size_t max_lag = 40;

  // distort
  std::size_t n_rfc = 200;
  double expand_scale = 0.0;  // 0 selects 1 / sqrt(n)
  std::size_t layers = 4;
  double gain = 0.3;
  double offset = 0.0;
  std::size_t onset = 0;
  std::size_t run_steps = 6000;
  std::size_t eval_steps = 2000;
};

// Reference defaults for one experiment.
ExperimentConfig default_config(Experiment e);

// Flat key = value text. '#' starts a comment. "[name]" opens a section;
// keys before any section and in [common] apply to every experiment, keys in
// the section named after `e` apply only to it, other sections are skipped.
// Lists are comma separated. Unknown keys and bad values throw ConfigError
// naming the key and line.
ExperimentConfig parse_config(std::string_view text, Experiment e,
                              std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path, Experiment e);

// Throws ConfigError naming the first invalid field.
void validate(const ExperimentConfig& cfg);

// key = value rendering of every field relevant to cfg.experiment, in a fixed
// order; parse_config of the result reproduces cfg.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace ccl

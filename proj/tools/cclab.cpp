// cclab: runs the conceptor experiments and writes CSVs plus gnuplot scripts.
//
//   cclab interpolate --config configs/interpolate.cfg --out out/interp
//   cclab degrade --seed 3 --mode both
//   cclab conceptor-dump --experiment degrade --out out/dump

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ccl/error.hpp"
#include "ccl/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::string experiment = "interpolate";
};

std::string escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch == '\n' ? ' ' : ch;
  }
  return out;
}

int report(std::string_view code, std::string_view message) {
  std::cerr << "error code=" << code << " message=\"" << escape(message) << "\"\n";
  return 1;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key=value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed (overrides the config)");
  cmd->add_option("--out", f.out, "output directory (overrides the config)");
  cmd->add_option("--mode", f.mode, "static, ccl or both (overrides the config)")
      ->check(CLI::IsMember({"static", "ccl", "both"}));
}

ccl::ExperimentConfig resolve(const Flags& f, ccl::Experiment e) {
  ccl::ExperimentConfig cfg = f.config.empty() ? ccl::default_config(e) : ccl::load_config(f.config, e);
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.out_dir = *f.out;
  if (f.mode) cfg.mode = ccl::parse_mode(*f.mode);
  ccl::validate(cfg);
  return cfg;
}

void list(const ccl::ExperimentConfig& cfg, const std::vector<std::string>& files) {
  for (const std::string& name : files) std::cout << (cfg.out_dir / name).string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conceptor control loop experiments"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* interp = app.add_subcommand("interpolate", "period interpolation between two sines");
  CLI::App* degrade = app.add_subcommand("degrade", "robustness to removed neurons");
  CLI::App* distort = app.add_subcommand("distort", "RFC hierarchy on a distorted signal");
  CLI::App* dump = app.add_subcommand("conceptor-dump", "train and write conceptors");
  for (CLI::App* cmd : {interp, degrade, distort, dump}) add_common(cmd, f);
  dump->add_option("--experiment", f.experiment, "which experiment to train")
      ->check(CLI::IsMember({"interpolate", "degrade", "distort"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("UsageError", e.what());
    return 2;
  }

  try {
    if (interp->parsed()) {
      const auto cfg = resolve(f, ccl::Experiment::Interpolate);
      list(cfg, ccl::write_outputs(cfg, ccl::run_interpolation(cfg)));
    } else if (degrade->parsed()) {
      const auto cfg = resolve(f, ccl::Experiment::Degrade);
      list(cfg, ccl::write_outputs(cfg, ccl::run_degradation(cfg)));
    } else if (distort->parsed()) {
      const auto cfg = resolve(f, ccl::Experiment::Distort);
      list(cfg, ccl::write_outputs(cfg, ccl::run_distortion(cfg)));
    } else {
      const auto cfg = resolve(f, ccl::parse_experiment(f.experiment));
      list(cfg, ccl::write_conceptor_dump(cfg));
    }
  } catch (const ccl::Error& e) {
    return report(ccl::to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return report("Internal", e.what());
  }
  return 0;
}

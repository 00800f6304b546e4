#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sns/config.hpp"
#include "sns/experiment.hpp"
#include "sns/fixed_point.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::int64_t seed = -1;
  int workers = 1;
  std::string out;
  std::string calibration;
};

int dispatch(const std::string& command, const Flags& flags) {
  sns::ExperimentConfig cfg =
      flags.config_path.empty() ? sns::parse_config("") : sns::load_config(flags.config_path);
  if (flags.seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(flags.seed);
  if (!flags.out.empty()) cfg.output_dir = flags.out;

  sns::RunOptions opts;
  opts.workers = flags.workers;
  opts.calibration_file = flags.calibration;
  opts.log = &std::cout;

  if (command == "verify") return sns::cmd_verify(cfg, opts);
  if (command == "eta-stats") return sns::cmd_eta_stats(cfg, opts);
  if (command == "calibrate") return sns::cmd_calibrate(cfg, opts);
  if (command == "lifespan") return sns::cmd_lifespan(cfg, opts);
  return sns::cmd_simulate(cfg, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Navier-Stokes lifespan experiments"};
  app.require_subcommand(1, 1);

  Flags flags;
  const char* commands[][2] = {
      {"verify", "run the invariant suite and print a pass/fail table"},
      {"eta-stats", "sample Brownian paths and check the eta bound"},
      {"calibrate", "measure the bilinear constant and write a calibration file"},
      {"lifespan", "measure empirical lifespans against the certified lower bound"},
      {"simulate", "solve the mild equation once and write a snapshot"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config_path, "configuration file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "override monte_carlo.base_seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--workers", flags.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "override output.dir");
    if (std::string(name) == "lifespan") {
      sub->add_option("--calibration", flags.calibration, "calibration file (overrides calibrate.file)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? sns::kExitOk : sns::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return dispatch(command, flags);
  } catch (const sns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return sns::kExitConfig;
  } catch (const sns::GridMismatch& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return sns::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << command << " failed: " << e.what() << '\n';
    return sns::kExitFailure;
  }
}

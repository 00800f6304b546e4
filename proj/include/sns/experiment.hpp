#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sns/config.hpp"
#include "sns/mild_solver.hpp"

namespace sns {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

struct RunOptions {
  int workers = 1;
  std::string calibration_file;  // lifespan: overrides the config
  std::ostream* log = nullptr;   // progress and tables; may be null
};

/// Initial field of the config at one amplitude.
SpectralField make_initial_field(const ExperimentConfig& cfg, const GridPtr& grid, double amplitude);
/// Seed of Monte Carlo job i.
std::uint64_t job_seed(const ExperimentConfig& cfg, std::size_t index);
BrownianPath job_path(const ExperimentConfig& cfg, std::size_t index);

struct EtaRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double sup_eta = 1.0;
  double t_at_sup = 0.0;
  bool tail_certified = false;
  double max_bound_ratio = 0.0;  // max over samples of eta / its analytic bound
  double final_time = 0.0;
  std::size_t violations = 0;    // samples with eta above the bound
  double first_violation_t = -1.0;
};

EtaRecord eta_job(const ExperimentConfig& cfg, const GridPtr& grid, std::size_t index);
std::vector<EtaRecord> run_eta_jobs(const ExperimentConfig& cfg, const GridPtr& grid, int workers);
std::string eta_csv(const std::vector<EtaRecord>& records);

struct CalibrationPoint {
  double t = 0.0;
  double c_hat_zero_noise = 0.0;
  double c_hat_noisy = 0.0;  // 0 without noise
};

struct Calibration {
  double c_hat = 0.0;
  double c_gamma_derived = 0.0;
  double gamma = 0.5;
  int grid_n = 0;
  double grid_length = 0.0;
  std::vector<CalibrationPoint> points;
  int ensemble_size = 0;
  int steps = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

Calibration run_calibration(const ExperimentConfig& cfg, const GridPtr& grid, int workers);
std::string calibration_json(const Calibration& cal);
Calibration parse_calibration_json(const std::string& text);

struct LifespanRecord {
  std::size_t amplitude_index = 0;
  double amplitude = 0.0;
  std::size_t seed_index = 0;
  std::uint64_t seed = 0;
  LifespanReport report;
  double wall_seconds = 0.0;  // kept out of the deterministic CSV
};

std::vector<LifespanRecord> run_lifespan_jobs(const ExperimentConfig& cfg, const GridPtr& grid, const Calibration& cal,
                                              int workers);
std::string lifespan_csv(const std::vector<LifespanRecord>& records);
/// Least-squares slope of log t_empirical against log amplitude over records
/// with t_empirical > 0 and amplitude > 0; NaN with fewer than two amplitudes.
double amplitude_slope(const std::vector<LifespanRecord>& records);

int cmd_verify(const ExperimentConfig& cfg, const RunOptions& opts);
int cmd_eta_stats(const ExperimentConfig& cfg, const RunOptions& opts);
int cmd_calibrate(const ExperimentConfig& cfg, const RunOptions& opts);
int cmd_lifespan(const ExperimentConfig& cfg, const RunOptions& opts);
int cmd_simulate(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace sns

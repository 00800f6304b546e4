#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sns/noise.hpp"

namespace sns {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed line in a config file.
class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& message)
      : ConfigError("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Every violated constraint of a syntactically valid config.
class ValidationError : public ConfigError {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

using ConfigValue = std::variant<std::int64_t, double, bool, std::string, std::vector<double>>;

struct ConfigEntry {
  ConfigValue value;
  int line = 0;
};

/// `key = value` lines; values are integers, reals, true/false, "strings" or
/// [real, ...] lists. '#' starts a comment outside strings.
std::map<std::string, ConfigEntry> parse_config_text(const std::string& text);

struct ExperimentConfig {
  int grid_n = 32;
  double grid_length = 6.283185307179586476925286766559;
  double gamma = 0.5;

  std::vector<ChannelSpec> channels;
  NoiseModel noise;

  double horizon = 1.0;  // Brownian path span
  int steps = 500;       // Brownian path grid

  int picard_steps = 16;
  double picard_tol = 1e-9;
  int picard_max_iter = 50;

  double t_probe_max = 0.5;
  int levels = 24;
  int refine = 6;

  int num_paths = 1;
  std::uint64_t base_seed = 0;
  bool dump_paths = false;

  std::string initial_field = "taylor-green";  // taylor-green | shear-wave | random | snapshot
  std::vector<double> amplitudes{1.0};
  std::uint64_t initial_seed = 0;
  std::string snapshot_path;

  std::vector<double> t_ladder{0.05, 0.2, 1.0};
  int ensemble_size = 16;
  int calibrate_steps = 16;
  std::string calibration_file;  // empty: <output_dir>/calibration.json

  double simulate_time = 0.1;
  std::string output_dir = "out";

  /// Tolerance of the partition-of-unity check in `verify`; a test hook.
  double partition_tolerance = 1e-10;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical key = value listing of the effective configuration (output paths excluded).
std::string canonical_config(const ExperimentConfig& cfg);
/// FNV-1a 64 of canonical_config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace sns

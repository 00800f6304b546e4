#pragma once

#include <string>
#include <vector>

#include "sns/config.hpp"

namespace sns {

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
  std::string module;
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // the bound it is compared against
  std::string detail;
};

const char* to_string(CheckStatus s);

/// Runs every invariant of the library at the configured grid, noise and gamma.
std::vector<CheckResult> run_invariant_suite(const ExperimentConfig& cfg, int workers = 1);

}  // namespace sns

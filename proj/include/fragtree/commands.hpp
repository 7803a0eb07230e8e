#pragma once

#include <ostream>
#include <string>

#include "fragtree/config.hpp"

namespace fragtree {

enum ExitCode : int {
  kSuccess = 0,
  kStatisticalFailure = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

// Each command writes its files into config.out (created if missing) and a
// short summary to `log`.  Errors are caught and mapped to exit codes.
int cmd_moments(const ExperimentConfig& config, std::ostream& log);
int cmd_grow(const ExperimentConfig& config, std::ostream& log);
int cmd_brownian_suite(const ExperimentConfig& config, std::ostream& log);
int cmd_bifurcate(const ExperimentConfig& config, std::ostream& log);
int cmd_check_density(const ExperimentConfig& config, std::ostream& log);

/// Dispatch by subcommand name; unknown names are configuration errors.
int run_command(const std::string& name, const ExperimentConfig& config, std::ostream& log);

}  // namespace fragtree

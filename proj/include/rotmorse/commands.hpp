#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rotmorse/config.hpp"

namespace rotmorse::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kSolverError = 3,
  kCoverageError = 4,
  kValidationFailed = 5,
};

enum class CheckStatus { pass, fail, degraded };

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

/// Oracle and property checks run by `validate`.
std::vector<Check> run_checks(const RunConfig& cfg);

int cmd_channel(const RunConfig& cfg, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, std::ostream& log);
int cmd_wigner(const RunConfig& cfg, std::ostream& log);
int cmd_rotate(const RunConfig& cfg, std::ostream& log);
int cmd_validate(const RunConfig& cfg, std::ostream& log);

/// Runs a subcommand by name and maps exceptions to exit codes, printing the
/// message to `err`.
int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& log,
             std::ostream& err);

}  // namespace rotmorse::cli

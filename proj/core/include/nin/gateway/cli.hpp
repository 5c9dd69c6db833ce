#pragma once

#include <iosfwd>

namespace nin::gateway {

enum ExitCode : int {
  kExitOk = 0,
  kExitScenarioError = 1,
  kExitInvariantViolation = 2,
  kExitUsage = 64,
};

/// nin-testbed entry point. SIGINT/SIGTERM stop a serving run cleanly.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nin::gateway

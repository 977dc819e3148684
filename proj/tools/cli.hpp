#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flownav::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitPipeline = 3,
  kExitPlannerFailure = 4,
};

// Runs one command line (args[0] is the program name). Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flownav::cli

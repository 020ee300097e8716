#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace repsel {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolations = 1,
  kExitInput = 2,
  kExitContract = 3,
  kExitNoCover = 4,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace repsel

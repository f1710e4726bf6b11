#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mbrc::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kTargetUnreachable = 3,
  kConfigMismatch = 4,
};

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mbrc::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robustik::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kUnreachable = 2,
  kNoRobustIK = 3,
  kValidationFailed = 4,
};

/// Runs the command line (args exclude the program name). Regular output goes
/// to `out`, diagnostics and warnings to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robustik::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmc::cli {

/// Exit statuses. Mathematical refutation and search exhaustion are kept
/// apart so scripts can retry with larger budgets.
enum ExitCode : int {
  kSuccess = 0,
  kRefuted = 1,        // Refuted verdict, unmet premise, or no noise support found
  kIndeterminate = 2,  // search budget or enumeration cap exhausted
  kUsage = 64,         // bad flags or arguments
  kDataError = 65,     // malformed input file
  kNoInput = 66,       // input file cannot be opened
  kInternal = 70,
};

/// Runs one invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmc::cli

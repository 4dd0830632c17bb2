#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tbn::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kDataError = 3,
  kTractability = 4,
};

// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tbn::cli

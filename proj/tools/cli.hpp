#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace inar::cli {

enum ExitCode : int {
  kPass = 0,
  kValidationFailed = 1,
  kUsage = 2,
  kAssumption = 3,
};

/// Runs the command line `inar <args...>` (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace inar::cli

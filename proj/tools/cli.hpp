#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kgraph::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalid = 2,
  kParseError = 3,
  kIoError = 4,
  kResourceError = 5,
  kInternalError = 6,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgraph::cli

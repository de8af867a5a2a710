#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace icindex::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kSelftestFailed = 1,
  kParseError = 2,
  kAlignmentError = 3,
  kInfeasibleSplit = 4,
  kUsage = 64,
  kInternal = 70,
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
  /// Decorate table headers with ANSI bold.
  bool color = false;
};

/// Parses `args` (without the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, Streams streams);

}  // namespace icindex::cli

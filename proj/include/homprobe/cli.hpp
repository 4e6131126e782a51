#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homprobe::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kInvalidInput = 2,
  kNumericalFailure = 3,
};

/// Parses argv (args[0] is the program name), runs one subcommand and
/// returns the process exit code. Results go to `out` unless --out names a
/// file; diagnostics go to `err`, one per line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace homprobe::cli

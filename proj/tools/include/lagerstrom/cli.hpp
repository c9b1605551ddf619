#pragma once

#include <iosfwd>

namespace lagerstrom::cli {

enum ExitCode : int {
  kOk = 0,
  kSolverError = 1,
  kFlagError = 2,
  kVerificationFailure = 3,
};

/// Parses argv (argv[0] is the program name), runs the selected command and
/// returns its exit code. Tables go to --out or `out`; diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lagerstrom::cli

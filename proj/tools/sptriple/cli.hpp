#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace sptriple {

enum ExitCode : int {
  kOk = 0,
  /// compare: NOT-EQUIVALENT or MEASURE-DIFFERENT; check: certificate failed
  kNegative = 1,
  kInputError = 2,
  kNumericError = 3,
};

/// Runs one command. \p args excludes the program name; results go to
/// \p out unless --out names a file, diagnostics to \p err.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace sptriple

#pragma once

#include <iosfwd>

namespace ghostint {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNumericalGuard = 3,
  kDualityViolation = 4,
};

/// Entry point shared by main() and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ghostint

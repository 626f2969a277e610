#pragma once

#include <iosfwd>

namespace ndsid::cli {

// Exit codes above 2 (0/1/2 are the check verdicts).
enum ExitCode : int {
  kParseError = 3,
  kShapeError = 4,
  kIllPosed = 5,
  kPrecondition = 6,
  kNumeric = 7,
  kInternal = 8,
  kUsage = 64,
};

/// Entry point of the ndsid tool, with the streams injected for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ndsid::cli

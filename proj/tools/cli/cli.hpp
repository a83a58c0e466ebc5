#pragma once

#include <ostream>

namespace fundusmark::cli {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kUnreadable = 2,
  kLocalizationFailed = 3,
  kCapacityExceeded = 4,
  kMalformedSidecar = 5,
  kUnwritable = 6,
};

// Entry point behind `fundusmark`. Machine-readable key=value lines go to
// out, human-readable diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fundusmark::cli

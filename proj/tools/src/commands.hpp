#pragma once

#include <ostream>

namespace pvinspect::cli {

enum ExitCode : int { kOk = 0, kProcessingError = 1, kUsageError = 2 };

/// Entry point of the `pvinspect` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pvinspect::cli

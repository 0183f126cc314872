#pragma once

#include <iosfwd>

namespace hybridsr::cli {

enum ExitCode : int { kSuccess = 0, kNotConverged = 1, kUsageError = 2, kIoError = 3 };

/// Entry point behind the `hybridsr` executable; writes results to `out` and
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hybridsr::cli

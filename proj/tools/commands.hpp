#pragma once

#include <iosfwd>

namespace ctxfuse::cli {

/// Exit codes: 0 success, 1 usage error, 2 validation error, 3 runtime error.
enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ctxfuse::cli

#pragma once

#include <ostream>

namespace strand {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,  ///< I/O and other runtime failures
    kExitConfig = 2,
    kExitNotFlat = 3,
    kExitCheckFailed = 4,
    kExitBlowup = 5,
};

/// Entry point of `strand-reduce`; writes normal output to out and diagnostics to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace strand

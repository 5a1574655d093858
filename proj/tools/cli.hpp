#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qhosvd::cli {

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kUsage = 2,
    kIo = 3,
    kNumerical = 4,
};

// Runs the command line `args` (without the program name), writing results
// to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qhosvd::cli

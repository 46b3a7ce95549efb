#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mirrork {

/// Exit codes of the command-line frontend.
enum ExitCode : int { kExitOk = 0, kExitInvalid = 2, kExitUnsupported = 3, kExitMismatch = 4 };

/// Runs the command line (args[0] is the program name). Results go to out;
/// errors are reported as one line "error: <kind>: <reason>" on err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mirrork

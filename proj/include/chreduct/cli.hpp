#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chreduct::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kPass = 0,
    kCheckFailed = 1,
    kUnknownName = 2,
    kBadInput = 3,  ///< malformed JSON or invalid configuration
    kOutputError = 4,
};

/// Runs the tool on argv-style arguments (args[0] is the program name).
/// Reports go to --out when given, otherwise to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chreduct::cli

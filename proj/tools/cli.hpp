#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpq::cli {

/// Exit codes of the command-line front end.
enum ExitCode {
    kOk = 0,
    kNegative = 1,  // member / walk-member answered "false"
    kUsage = 2,     // bad flags or malformed input files
    kGuard = 3,     // an instance-size guard tripped
};

/// Runs one invocation. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rpq::cli

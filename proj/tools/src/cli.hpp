#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rabi::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kNonConvergence = 4 };

// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// printf-style "%.17g"; nan and inf print as such.
std::string format_number(double v);

}  // namespace rabi::cli

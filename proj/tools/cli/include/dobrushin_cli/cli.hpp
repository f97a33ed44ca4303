#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dobrushin::cli {

/// Exit codes: 0 success (including --help), 2 malformed input or invalid
/// parameters, 3 solver or numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dobrushin::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hexenum {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInvalidInput = 2, kExitBudget = 3 };

/// Runs the command line tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hexenum

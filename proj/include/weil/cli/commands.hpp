#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace weil::cli {

enum ExitCode : int { kSuccess = 0, kAssertionFailure = 1, kUsageError = 2 };

/// Runs the weilsum front end. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weil::cli

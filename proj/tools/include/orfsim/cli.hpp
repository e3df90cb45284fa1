#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orfsim {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kRuntimeError = 2 };

/// Entry point of the command-line tool. `args` excludes the program name.
int cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orfsim

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ccs {

enum ExitCode { kExitPass = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitComputation = 3 };

// args excludes the program name
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccs

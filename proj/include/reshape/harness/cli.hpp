#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace reshape::harness {

/// Process exit codes of the `reshape` tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitDataError = 1,
    kExitUsage = 2,
    kExitCertificationFailed = 3,
};

/// Entry point behind the `reshape` executable. `args` excludes the program
/// name. Subcommands: approx, sweep, covid, verify-theorem.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reshape::harness

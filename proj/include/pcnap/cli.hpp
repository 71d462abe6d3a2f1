#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pcnap {

// Exit codes of the command-line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_validation = 2,
    exit_infeasible = 3,
    exit_cap = 4,
    exit_internal = 5,
};

// args excludes the program name. Results go to out unless --out names a file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcnap

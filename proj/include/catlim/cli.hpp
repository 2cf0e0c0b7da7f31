#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace catlim {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,  // a law or verification failure
  exit_input = 2,    // unreadable, malformed or ill-typed input
  exit_capacity = 3,
};

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catlim

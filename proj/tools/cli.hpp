#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nacap::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_spec_error = 2,
  exit_precision = 3,
  exit_precondition = 4,
};

/// Runs one command; args exclude the program name. The report goes to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nacap::cli

// Command-line front end.  One process, one subcommand per run; every run
// emits a JSON report (scalars + tables) plus one CSV per table under the
// --out directory, written atomically.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypwave {

// Parses args (without the program name), executes the selected subcommand,
// and returns the process exit code:
//   0 success, 1 validation failure, 2 numerical failure, 3 I/O failure.
// Normal output goes to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace hypwave

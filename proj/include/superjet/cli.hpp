#pragma once

#include <iosfwd>

namespace superjet {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_input_error = 2 };

/// Runs the command-line interface: `argv[0] <command> [options] <document>`. A document path of
/// "-" reads `in`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace superjet

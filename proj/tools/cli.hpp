// cli.hpp - command-line front end: spectrum, sweep, theorem, optimize

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace medent::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitNumerical = 3,
    kExitCounterexample = 4,
};

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// key=value lines; blank lines and lines starting with '#' are skipped,
/// whitespace around keys and values is trimmed. Throws PreconditionError.
std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in);

/// Inserts the entries of a --config file as --key=value right after the
/// subcommand name, so explicit flags (later on the line) win.
std::vector<std::string> merge_config(const std::vector<std::string>& args);

} // namespace medent::cli

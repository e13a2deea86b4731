#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ultralattice::cli {

enum ExitCode { Ok = 0, Failure = 1, Usage = 2, Undecidable = 3 };

/// Parses `args` (without the program name), runs one subcommand and writes
/// its rendering to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ultralattice::cli

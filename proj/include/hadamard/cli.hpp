#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hadamard {

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless --output names a file; diagnostics go to `err`. Returns 0 on
/// success, 2 on usage or validation errors, 1 on internal errors.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hadamard

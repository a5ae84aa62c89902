#pragma once

#include <iosfwd>

namespace strpend {

/// Entry point of the strpend tool. Returns the process exit code
/// (0 ok, 1 config error, 2 solver failure, 3 I/O error).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace strpend

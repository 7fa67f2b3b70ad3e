#pragma once

#include <string>
#include <vector>

namespace pano::cli {

/// Parses and runs one subcommand. Returns the process exit code: 0 on
/// success, 1 on invalid arguments or failed preconditions, 2 on I/O and
/// parse errors.
int run(int argc, const char* const* argv);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args);

}  // namespace pano::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scholimetric::cli {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 on success, 2 on invalid input. Errors go to `err` as a
/// single line starting with "error: ".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scholimetric::cli

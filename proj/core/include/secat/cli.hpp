#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace secat::cli {

// Runs one CLI invocation; args excludes the program name. Returns the process
// exit code: 0 definitive, 2 inconclusive, 1 error/invalid input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secat::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fencenat::cli {

// Runs one CLI invocation (args exclude the program name) against the given
// streams and returns the process exit code:
//   0  success / property holds
//   1  property fails / verification failed
//   2  usage error, syntax error, or violated precondition
//   3  internal inconsistency or analytic/oracle disagreement
// Used by main() with the real streams and by the test suite in-process.
int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace fencenat::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pillowfold {

// Exit codes: 0 success, 2 validation failure, 1 any other error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInvalid = 2;

// Runs one command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pillowfold

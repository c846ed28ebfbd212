#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // a verification or solve did not pass
inline constexpr int kExitUsage = 2;   // bad arguments or malformed input

// Runs one subcommand. args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperma::cli

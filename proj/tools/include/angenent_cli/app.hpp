#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace angenent::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Runs the command line `args` (args[0] is the program name). Returns the
/// process exit code: 0 success, 1 usage error, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace angenent::cli

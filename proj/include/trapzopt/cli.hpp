#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trapzopt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitUsage = 64;

/// Entry point for `trapzopt profile|simulate|sweep|optimize ...`. `args`
/// excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trapzopt::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opvar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailed = 2;

/// Runs one CLI invocation. args excludes the program name.
/// Returns 0 when every check passed, 2 when some check failed, 1 on usage,
/// input or I/O errors (reported on err).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opvar

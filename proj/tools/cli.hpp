#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pixelate::cli {

/// Exit codes: 0 success, 1 I/O failure, 2 invalid arguments or data.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;

/// Runs the command line `pixelate <args...>`; `args` excludes the program
/// name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pixelate::cli

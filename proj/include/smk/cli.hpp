#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace smk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerdictFalse = 2;
inline constexpr int kExitUsage = 64;

/// Runs one subcommand. The JSON report goes to `out` (or to --output), logs
/// and usage text to `err`. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smk::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace partfec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

// Runs one command line (without the program name). Results go to `out` as
// JSON or CSV, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace partfec::cli

#pragma once

// Command-line front end; `run` is the whole tool minus process exit.

#include <iosfwd>
#include <string>
#include <vector>

namespace proofgram::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace proofgram::cli
